// odds - batch experiment runner for the stochastic laboratory.
//
//   odds <experiment> --config FILE [--seed U64] [--replicates N]
//        [--workers N] [--out PATH] [--format csv|jsonl]
//   odds sweep --config FILE --ladder KEY=v1,v2,...
//
// Exit status 0 iff every report row passes.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odds/config.hpp"
#include "odds/experiments.hpp"
#include "odds/parallel.hpp"

namespace {

void apply_workers(std::optional<int> workers) {
    if (workers) {
        odds::par::set_worker_count(*workers);
        return;
    }
    if (const char* env = std::getenv("ODDS_WORKERS")) {
        try {
            odds::par::set_worker_count(std::stoi(env));
        } catch (...) {
            throw std::invalid_argument("ODDS_WORKERS must be an integer");
        }
    }
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"odds - stochastic laboratory experiment runner"};
    app.require_subcommand(1);

    std::string config_arg;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicates;
    std::optional<int> workers;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    std::string ladder;

    auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* opt = cmd->add_option("--config", config_arg, "config file path or inline JSON");
        if (config_required) opt->required();
        cmd->add_option("--seed", seed, "seed override");
        cmd->add_option("--replicates", replicates, "replicate count override");
        cmd->add_option("--workers", workers, "worker thread count (ODDS_WORKERS fallback)");
        cmd->add_option("--out", out_path, "report output path (default: stdout)");
        cmd->add_option("--format", format, "csv or jsonl");
    };

    std::vector<CLI::App*> experiment_cmds;
    for (const auto& name : odds::experiment_names()) {
        auto* cmd = app.add_subcommand(name, "run the " + name + " experiment");
        add_common(cmd, false);
        experiment_cmds.push_back(cmd);
    }
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter ladder");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--ladder", ladder, "KEY=v1,v2,...")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        apply_workers(workers);
        CLI::App* active = app.get_subcommands().front();
        odds::ExperimentConfig cfg;
        if (!config_arg.empty()) {
            cfg = odds::parse_config(config_arg);
        } else {
            cfg.experiment = active->get_name();
        }
        if (active->get_name() != "sweep") {
            if (!config_arg.empty() && cfg.experiment != active->get_name())
                throw std::invalid_argument("config experiment \"" + cfg.experiment +
                                            "\" does not match subcommand \"" +
                                            active->get_name() + "\"");
            cfg.experiment = active->get_name();
        }
        if (seed) cfg.seed = *seed;
        if (replicates) cfg.replicates = *replicates;
        if (out_path) cfg.output = *out_path;
        if (format) {
            if (*format == "csv") {
                cfg.format = odds::ReportFormat::csv;
            } else if (*format == "jsonl") {
                cfg.format = odds::ReportFormat::jsonl;
            } else {
                throw std::invalid_argument("--format must be csv or jsonl");
            }
        }

        odds::RunResult result;
        if (active->get_name() == "sweep") {
            const auto eq = ladder.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--ladder must have the form KEY=v1,v2,...");
            const std::string key = ladder.substr(0, eq);
            const auto values = split_commas(ladder.substr(eq + 1));
            if (key.empty() || values.empty())
                throw std::invalid_argument("--ladder must name a key and at least one value");
            result = odds::run_sweep(cfg, key, values);
        } else {
            result = odds::run(cfg);
        }
        if (cfg.output.empty()) std::cout << result.body;
        return result.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "odds: " << e.what() << "\n";
        return 2;
    }
}
