#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "crashrepro/harness/experiment.hpp"
#include "crashrepro/harness/stats.hpp"

using namespace crashrepro;
using namespace crashrepro::harness;

namespace fs = std::filesystem;

namespace {

double a12_brute(const std::vector<double>& a, const std::vector<double>& b) {
    double score = 0;
    for (double x : a)
        for (double y : b) {
            if (x < y) score += 1.0;
            else if (x == y) score += 0.5;
        }
    return score / ((double)a.size() * (double)b.size());
}

void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// A scenario whose target method throws unconditionally: any test calling
// boom() reproduces the crash.
fs::path make_scenario(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("crashrepro-" + name);
    fs::remove_all(dir);
    write_file(dir / "program" / "prog.sut",
               "class T {\n"
               "  field z: int;\n"
               "  constructor() { this.z = 0; }\n"
               "  method boom() {\n"
               "    throw Kaboom(\"x\");\n"
               "  }\n"
               "  method idle() { this.z = 1; }\n"
               "}\n");
    write_file(dir / "tests" / "smoke.sut-test",
               "t = new T();\n"
               "t.idle();\n");
    write_file(dir / "crash.txt", "Kaboom: x\n\tat T.boom(prog.sut:5)\n");
    write_file(dir / "scenario.toml",
               "target-frame-level = 1\n"
               "population = 10\n"
               "budget = 200\n");
    return dir;
}

}  // namespace

TEST_CASE("a12: worked values") {
    CHECK(vargha_delaney_a12({5, 5, 5}, {5, 5, 5}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(vargha_delaney_a12({1, 2}, {2, 3}) == doctest::Approx(0.875).epsilon(1e-12));
    CHECK(vargha_delaney_a12({1, 2}, {3, 4}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vargha_delaney_a12({3, 4}, {1, 2}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a12: matches pair counting on random samples, and complements") {
    behmodel::Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> a, b;
        std::size_t m = 1 + rng() % 12, n = 1 + rng() % 12;
        for (std::size_t i = 0; i < m; ++i) a.push_back((double)(rng() % 8));
        for (std::size_t i = 0; i < n; ++i) b.push_back((double)(rng() % 8));
        double lhs = vargha_delaney_a12(a, b);
        REQUIRE(lhs == doctest::Approx(a12_brute(a, b)).epsilon(1e-12));
        REQUIRE(lhs + vargha_delaney_a12(b, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("a12: empty samples are rejected") {
    CHECK_THROWS_AS(vargha_delaney_a12({}, {1.0}), std::invalid_argument);
}

TEST_CASE("bundle: loads program, tests, crash, and settings") {
    auto dir = make_scenario("load");
    auto bundle = load_bundle(dir);
    CHECK(bundle.name == "crashrepro-load");
    CHECK(bundle.program.classes.count("T") == 1);
    CHECK(bundle.tests.size() == 1);
    CHECK(bundle.crash.exception_type == "Kaboom");
    CHECK(bundle.crash.target_frame_level == 1);
    CHECK(bundle.settings.at("budget") == "200");
    fs::remove_all(dir);
}

TEST_CASE("bundle: missing crash.txt is an error") {
    auto dir = make_scenario("nocrash");
    fs::remove(dir / "crash.txt");
    CHECK_THROWS_AS(load_bundle(dir), sut::ParseError);
    fs::remove_all(dir);
}

TEST_CASE("bundle: unknown settings are rejected") {
    search::SearchConfig config;
    CHECK_THROWS_AS(apply_settings(config, {{"no-such-knob", "1"}}), sut::ParseError);
    apply_settings(config, {{"budget", "123"}, {"pick-init", "0.25"}});
    CHECK(config.budget == 123);
    CHECK(config.seeding.pick_init == 0.25);
}

TEST_CASE("pipeline: trivial scenario reproduces in every mode") {
    auto dir = make_scenario("pipeline");
    auto bundle = load_bundle(dir);
    for (auto mode :
         {search::SeedingMode::None, search::SeedingMode::Test, search::SeedingMode::Model}) {
        search::SearchConfig config;
        config.mode = mode;
        config.seed = 9;
        apply_settings(config, bundle.settings);
        auto result = run_pipeline(bundle, config);
        CHECK(result.outcome.status == search::OutcomeStatus::Reproduced);
    }
    fs::remove_all(dir);
}

TEST_CASE("outcome json: no wall time, effective config echoed") {
    auto dir = make_scenario("json");
    auto bundle = load_bundle(dir);
    search::SearchConfig config;
    config.seed = 4;
    apply_settings(config, bundle.settings);
    auto result = run_pipeline(bundle, config);
    auto j = outcome_json(result.outcome, config);
    CHECK(j["status"] == "reproduced");
    CHECK(j["config"]["population"] == 10);
    CHECK(j["config"]["budget"] == 200);
    CHECK(j["config"]["mutation-rate"] == "1/length");
    CHECK(!j.contains("wall-time"));
    CHECK(j.dump().find("time") == std::string::npos);

    auto again = outcome_json(run_pipeline(bundle, config).outcome, config);
    CHECK(j.dump(2) == again.dump(2));
    fs::remove_all(dir);
}

TEST_CASE("experiment: row counts, determinism, and errors") {
    auto dir = make_scenario("exp");
    ExperimentConfig config;
    config.scenarios.push_back(load_bundle(dir));
    config.modes = {search::SeedingMode::None, search::SeedingMode::Model};
    config.repetitions = 3;
    config.seed_base = 100;
    auto report = run_experiment(config);

    std::size_t lines = std::count(report.csv.begin(), report.csv.end(), '\n');
    // comment + run header + 6 runs + aggregate header + 2 aggregates
    CHECK(lines == 11);
    CHECK(report.json["runs"].size() == 6);
    CHECK(report.json["aggregates"].size() == 2);
    CHECK(!report.json["runs"][0].contains("seed"));  // seed lives under config
    CHECK(report.json["runs"][0]["config"]["seed"] == 100);
    CHECK(report.json["runs"][1]["config"]["seed"] == 101);

    auto repeat = run_experiment(config);
    CHECK(report.csv == repeat.csv);

    config.repetitions = 0;
    CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
    fs::remove_all(dir);
}

TEST_CASE("experiment: majority outcome follows the most frequent status") {
    auto dir = make_scenario("maj");
    ExperimentConfig config;
    config.scenarios.push_back(load_bundle(dir));
    config.modes = {search::SeedingMode::None};
    config.repetitions = 3;
    auto report = run_experiment(config);
    CHECK(report.json["aggregates"][0]["majority-outcome"] == "reproduced");
    CHECK(report.json["aggregates"][0]["reproduced-ratio"] == 1.0);
    CHECK(report.json["aggregates"][0]["a12-evals-vs-baseline"] == 0.5);
    fs::remove_all(dir);
}

TEST_CASE("models: inference is shared and deterministic") {
    auto dir = make_scenario("models");
    auto bundle = load_bundle(dir);
    auto m1 = infer_models(bundle.program, bundle.tests);
    auto m2 = infer_models(bundle.program, bundle.tests);
    REQUIRE(m1.count("T") == 1);
    CHECK(behmodel::format_model(m1.at("T")) == behmodel::format_model(m2.at("T")));
    // the smoke test contributes a dynamic <init>/0, idle sequence
    CHECK(behmodel::accepts(m1.at("T"), {"<init>/0", "idle"}));
    fs::remove_all(dir);
}
