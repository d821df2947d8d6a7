#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odds/config.hpp"
#include "odds/experiments.hpp"
#include "odds/parallel.hpp"

using namespace odds;

TEST_CASE("parse_config: defaults applied, inline JSON accepted") {
    const auto cfg = parse_config(R"({"experiment":"wheel","params":{"M":100},"seed":1})");
    CHECK(cfg.experiment == "wheel");
    CHECK(cfg.seed == 1);
    CHECK(cfg.replicates == 1);
    CHECK(cfg.format == ReportFormat::csv);
    CHECK(cfg.params.at("M") == "100");
    // density defaulted downstream: the run succeeds
    CHECK(!run_experiment(cfg).empty());
}

TEST_CASE("parse_config: validation errors name the offense") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"params":{}})"),
                         "config: missing required key \"experiment\"", std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"experiment":"wheel","speling":1})"),
                         "config: unknown key \"speling\"", std::invalid_argument);
    const auto bad = parse_config_text(R"({"experiment":"wheel","params":{"M":0}})");
    CHECK_THROWS_WITH_AS(run_experiment(bad), "M must be >= 1", std::invalid_argument);
    const auto unknown_param = parse_config_text(R"({"experiment":"wheel","params":{"speling":1}})");
    CHECK_THROWS_WITH_AS(run_experiment(unknown_param), "unknown key \"speling\"",
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("not json"), std::invalid_argument);
    const auto unknown_exp = parse_config_text(R"({"experiment":"roulette"})");
    CHECK_THROWS_AS(run_experiment(unknown_exp), std::invalid_argument);
}

TEST_CASE("run: two-card config matches the published row") {
    auto cfg = parse_config_text(
        R"({"experiment":"shuffle","params":{"p":0.9,"n":3,"N":1000000},"seed":5})");
    const auto rows = run_experiment(cfg);
    REQUIRE(!rows.empty());
    CHECK(rows[0].statistic == "two_card_mc");
    CHECK(rows[0].target.value() == doctest::Approx(0.512));
    CHECK(rows[0].bound.value() == doctest::Approx(0.004));
    CHECK(rows[0].pass());
}

TEST_CASE("run: byte-identical bodies for identical config and seed") {
    auto cfg = parse_config_text(
        R"({"experiment":"needle","params":{"N":100000},"seed":11})");
    const auto a = run(cfg);
    const auto b = run(cfg);
    CHECK(a.body == b.body);
    CHECK(a.all_pass);
}

TEST_CASE("run: byte-identical bodies across worker counts") {
    auto cfg = parse_config_text(
        R"({"experiment":"halfcircle","params":{"T":2000,"motions":"1,1.41421356237","phases":"0.2,1.0"},"seed":3})");
    par::set_worker_count(1);
    const auto a = run(cfg);
    par::set_worker_count(4);
    const auto b = run(cfg);
    par::set_worker_count(1);
    CHECK(a.body == b.body);
}

TEST_CASE("run: kelvin validation failure before simulation") {
    auto cfg = parse_config_text(R"({"experiment":"kelvin","params":{"m_B":0}})");
    CHECK_THROWS_WITH_AS(run_experiment(cfg), "param \"m_B\" must be > 0", std::invalid_argument);
}

TEST_CASE("run: report file written atomically with header") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "odds_test_report.csv";
    auto cfg = parse_config_text(R"({"experiment":"limits","seed":2})");
    cfg.output = path.string();
    const auto result = run(cfg);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == result.body);
    CHECK(ss.str().rfind("# config_hash=", 0) == 0);
    CHECK(ss.str().find("experiment,param_key,param_value,statistic,value,target,bound,pass\n") !=
          std::string::npos);
    fs::remove(path);
}

TEST_CASE("run: jsonl format emits one object per row") {
    auto cfg = parse_config_text(R"({"experiment":"limits","seed":2,"format":"jsonl"})");
    const auto result = run(cfg);
    std::istringstream lines(result.body);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
        ++rows;
    }
    CHECK(rows >= 4);
}

TEST_CASE("exit-status fidelity: a failing fixture yields all_pass = false") {
    // needle MC against an exact target with an impossible bound: the gauss
    // density at table multiplier 1 is far from 2b/(pi a) = 1/pi
    auto cfg = parse_config_text(
        R"({"experiment":"needle","params":{"density":"gauss","n":1,"N":10000},"seed":1})");
    const auto rows = run_experiment(cfg);
    bool any_fail = false;
    for (const auto& r : rows) any_fail = any_fail || !r.pass();
    CHECK(any_fail);
    CHECK(!run(cfg).all_pass);
}

TEST_CASE("sweep: one row per ladder point plus a summary row") {
    auto base = parse_config_text(R"({"experiment":"wheel","seed":9})");
    const auto rows = sweep_experiment(base, "M", {"10", "100", "1000"});
    int bound_rows = 0;
    for (const auto& r : rows)
        if (r.statistic == "red_black_bound") ++bound_rows;
    CHECK(bound_rows == 3);
    CHECK(rows.back().statistic == "sweep_decay_max_ratio");
    // the trig density bound shrinks roughly linearly in epsilon
    CHECK(rows.back().value < 1.0);

    CHECK_THROWS_AS(sweep_experiment(base, "M", {}), std::invalid_argument);
    CHECK_THROWS_AS(sweep_experiment(base, "M", {"10", "0"}), std::invalid_argument);
}

TEST_CASE("config hash: sensitive to params, stable across runs") {
    auto a = parse_config_text(R"({"experiment":"wheel","params":{"M":10}})");
    auto b = parse_config_text(R"({"experiment":"wheel","params":{"M":20}})");
    CHECK(a.hash() != b.hash());
    CHECK(a.hash() == parse_config_text(R"({"experiment":"wheel","params":{"M":10}})").hash());
}
