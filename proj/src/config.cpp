#include "odds/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace odds {

namespace {

using nlohmann::json;

std::string to_param_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

std::string ExperimentConfig::hash() const {
    // canonical form: sorted params, fixed field order
    std::ostringstream canon;
    canon << "experiment=" << experiment << ";seed=" << seed << ";replicates=" << replicates
          << ";format=" << (format == ReportFormat::csv ? "csv" : "jsonl") << ";params={";
    for (const auto& [k, v] : params) canon << k << '=' << v << ';';
    canon << '}';
    const std::string s = canon.str();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig parse_config_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");

    ExperimentConfig cfg;
    bool have_experiment = false;
    for (const auto& [key, value] : doc.items()) {
        if (key == "experiment") {
            if (!value.is_string()) throw std::invalid_argument("config: experiment must be a string");
            cfg.experiment = value.get<std::string>();
            have_experiment = true;
        } else if (key == "params") {
            if (!value.is_object()) throw std::invalid_argument("config: params must be an object");
            for (const auto& [pk, pv] : value.items()) cfg.params[pk] = to_param_string(pv);
        } else if (key == "seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer())
                throw std::invalid_argument("config: seed must be an integer");
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "replicates") {
            if (!value.is_number_integer())
                throw std::invalid_argument("config: replicates must be an integer");
            cfg.replicates = value.get<int>();
            if (cfg.replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
        } else if (key == "output") {
            if (!value.is_string()) throw std::invalid_argument("config: output must be a string");
            cfg.output = value.get<std::string>();
        } else if (key == "format") {
            const std::string f = value.is_string() ? value.get<std::string>() : value.dump();
            if (f == "csv") {
                cfg.format = ReportFormat::csv;
            } else if (f == "jsonl") {
                cfg.format = ReportFormat::jsonl;
            } else {
                throw std::invalid_argument("config: format must be \"csv\" or \"jsonl\"");
            }
        } else {
            throw std::invalid_argument("config: unknown key \"" + key + "\"");
        }
    }
    if (!have_experiment) throw std::invalid_argument("config: missing required key \"experiment\"");
    return cfg;
}

ExperimentConfig parse_config(const std::string& path_or_inline) {
    if (!path_or_inline.empty() && path_or_inline.front() == '{')
        return parse_config_text(path_or_inline);
    std::ifstream f(path_or_inline);
    if (!f) throw std::invalid_argument("config: cannot open file: " + path_or_inline);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace odds
