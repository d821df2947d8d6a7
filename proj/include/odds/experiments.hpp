#pragma once

#include <string>
#include <vector>

#include "odds/config.hpp"
#include "odds/report.hpp"

namespace odds {

/// All registered experiment names.
const std::vector<std::string>& experiment_names();

/// Computes the report rows for one config (validates params, runs the
/// underlying modules). Deterministic in (config, seed) and independent of
/// the worker count.
std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg);

/// Parameter validation only; throws on any invalid or unknown parameter.
void validate_experiment(const ExperimentConfig& cfg);

struct RunResult {
    std::string body;
    bool all_pass = false;
};

/// Full run: rows, rendered report (written atomically when the config names
/// an output path), aggregate pass flag.
RunResult run(const ExperimentConfig& cfg);

/// One run per ladder value of `key`, plus a monotonicity summary row.
std::vector<ReportRow> sweep_experiment(const ExperimentConfig& base, const std::string& key,
                                        const std::vector<std::string>& values);

RunResult run_sweep(const ExperimentConfig& base, const std::string& key,
                    const std::vector<std::string>& values);

}  // namespace odds
