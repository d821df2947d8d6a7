#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "odds/report.hpp"

namespace odds {

inline constexpr const char* kToolVersion = "0.1.0";

/// Declarative description of one experiment run. Parsed from strict JSON:
/// unknown keys are rejected by name.
struct ExperimentConfig {
    std::string experiment;  // one of the registered experiment names
    std::map<std::string, std::string> params;  // validated downstream per experiment
    std::uint64_t seed = 1;
    int replicates = 1;
    std::string output;  // empty = stdout
    ReportFormat format = ReportFormat::csv;

    /// FNV-1a hash of the canonical form (everything except the output path).
    std::string hash() const;
};

/// Parses a config from a file path, or from inline JSON when the argument
/// starts with '{'.
ExperimentConfig parse_config(const std::string& path_or_inline);

/// Parses a config from JSON text.
ExperimentConfig parse_config_text(const std::string& json_text);

}  // namespace odds
