#include "odds/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace odds {

bool ReportRow::pass() const {
    if (!target || !bound) return true;
    return std::abs(value - *target) <= *bound;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render_report(const ReportHeader& header, const std::vector<ReportRow>& rows,
                          ReportFormat format) {
    std::string out;
    if (format == ReportFormat::csv) {
        out += "# config_hash=" + header.config_hash + " seed=" + std::to_string(header.seed) +
               " version=" + header.version + "\n";
        out += "experiment,param_key,param_value,statistic,value,target,bound,pass\n";
        for (const auto& r : rows) {
            out += r.experiment + ',' + r.param_key + ',' + r.param_value + ',' + r.statistic +
                   ',' + format_double(r.value) + ',';
            out += r.target ? format_double(*r.target) : std::string();
            out += ',';
            out += r.bound ? format_double(*r.bound) : std::string();
            out += ',';
            out += r.pass() ? "1" : "0";
            out += '\n';
        }
    } else {
        out += "{\"config_hash\":\"" + header.config_hash +
               "\",\"seed\":" + std::to_string(header.seed) + ",\"version\":\"" + header.version +
               "\"}\n";
        for (const auto& r : rows) {
            out += "{\"experiment\":\"" + r.experiment + "\",\"param_key\":\"" + r.param_key +
                   "\",\"param_value\":\"" + r.param_value + "\",\"statistic\":\"" + r.statistic +
                   "\",\"value\":" + format_double(r.value);
            if (r.target) out += ",\"target\":" + format_double(*r.target);
            if (r.bound) out += ",\"bound\":" + format_double(*r.bound);
            out += std::string(",\"pass\":") + (r.pass() ? "true" : "false") + "}\n";
        }
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& body) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open output path: " + tmp.string());
        f << body;
        if (!f.good()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace odds
