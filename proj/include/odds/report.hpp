#pragma once

#include <optional>
#include <string>
#include <vector>

namespace odds {

/// One experiment result: pass is true when no target/bound pair is present,
/// otherwise |value - target| <= bound.
struct ReportRow {
    std::string experiment;
    std::string param_key;
    std::string param_value;
    std::string statistic;
    double value = 0.0;
    std::optional<double> target;
    std::optional<double> bound;

    bool pass() const;
};

enum class ReportFormat { csv, jsonl };

struct ReportHeader {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
};

/// Deterministic rendering (17-significant-digit doubles, fixed row order).
std::string render_report(const ReportHeader& header, const std::vector<ReportRow>& rows,
                          ReportFormat format);

/// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& body);

/// Shortest round-trip decimal form of a double (deterministic).
std::string format_double(double v);

}  // namespace odds
