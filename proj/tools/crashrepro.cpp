// Command-line front end: analyze | infer-models | reproduce | experiment,
// plus run-test for replaying a single test file against a bundle's program.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "crashrepro/analysis/sequences.hpp"
#include "crashrepro/harness/experiment.hpp"
#include "crashrepro/sutlang/stacktrace.hpp"

namespace fs = std::filesystem;
using namespace crashrepro;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sut::ParseError("cannot write file", path.string(), 0);
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sut::ParseError("cannot read file", path.string(), 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonFlags {
    std::string seeding = "none";
    double pick_init = 0.8;
    double pick_mut = 0.3;
    double clone = 0.5;
    std::size_t budget = 62328;
    std::size_t population = 100;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seeding", seeding, "Seeding mode: none|test|model")
            ->check(CLI::IsMember({"none", "test", "model"}));
        cmd->add_option("--pick-init", pick_init, "Pr[pick init]")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--pick-mut", pick_mut, "Pr[pick mut]")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--clone", clone, "Pr[clone]")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--budget", budget, "Fitness-evaluation budget");
        cmd->add_option("--population", population, "Population size");
        cmd->add_option("--seed", seed, "Random seed (experiment: seed base)");
    }

    search::SearchConfig to_config() const {
        search::SearchConfig config;
        config.mode = harness::parse_mode(seeding);
        config.seeding.pick_init = pick_init;
        config.seeding.pick_mut = pick_mut;
        config.seeding.clone = clone;
        config.budget = budget;
        config.population_size = population;
        config.seeding.behaviors_per_model = population;
        config.seed = seed;
        return config;
    }
};

int cmd_analyze(const std::string& bundle_dir, const std::string& out_dir) {
    auto bundle = harness::load_bundle(bundle_dir);
    analysis::CollectionLog log;
    auto sequences = analysis::collect_static_sequences(bundle.program, &log);
    std::set<std::string> classes;
    for (const auto& [name, cd] : bundle.program.classes) classes.insert(name);
    auto dynamic =
        analysis::collect_dynamic_sequences(bundle.program, bundle.tests, classes, &log);
    for (auto& [cls, seqs] : dynamic) sequences[cls].insert(seqs.begin(), seqs.end());
    for (const auto& w : log.warnings) std::cerr << "warning: " << w << "\n";

    std::string dump = analysis::format_sequences(sequences);
    if (out_dir.empty())
        std::cout << dump;
    else
        write_file(fs::path(out_dir) / "sequences.tsv", dump);
    return 0;
}

int cmd_infer_models(const std::string& bundle_dir, const std::string& out_dir) {
    auto bundle = harness::load_bundle(bundle_dir);
    if (bundle.program.classes.empty())
        throw sut::ParseError("empty program", bundle_dir, 0);
    std::vector<std::string> warnings;
    auto models = harness::infer_models(bundle.program, bundle.tests, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    fs::path out = out_dir.empty() ? fs::path(bundle_dir) / "models" : fs::path(out_dir);
    std::string stats = "class\tstates\ttransitions\tbfs-height\n";
    for (const auto& [cls, model] : models) {
        write_file(out / (cls + ".model"), behmodel::format_model(model));
        auto s = behmodel::model_stats(model);
        stats += cls + "\t" + std::to_string(s.state_count) + "\t" +
                 std::to_string(s.transition_count) + "\t" +
                 std::to_string(s.bfs_height) + "\n";
    }
    write_file(out / "stats.tsv", stats);
    std::cout << stats;
    return 0;
}

std::map<std::string, behmodel::TransitionSystem> load_models(const std::string& dir) {
    std::map<std::string, behmodel::TransitionSystem> models;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".model") {
            auto model = behmodel::parse_model(read_file(entry.path()));
            models.emplace(model.class_name(), std::move(model));
        }
    return models;
}

int cmd_reproduce(const std::string& bundle_dir, const CommonFlags& flags,
                  const std::string& models_dir, const std::string& out_dir) {
    auto bundle = harness::load_bundle(bundle_dir);
    auto config = flags.to_config();
    harness::apply_settings(config, bundle.settings);

    std::map<std::string, behmodel::TransitionSystem> models;
    bool have_models = !models_dir.empty();
    if (have_models) models = load_models(models_dir);

    auto start = std::chrono::steady_clock::now();
    auto result =
        harness::run_pipeline(bundle, config, have_models ? &models : nullptr);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    fs::path out = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    write_file(out / "outcome.json",
               harness::outcome_json(result.outcome, config).dump(2) + "\n");
    write_file(out / "search.log", result.outcome.search_log);
    if (result.outcome.best_test)
        write_file(out / "best.sut-test", sut::format_test(*result.outcome.best_test));

    std::cerr << "status: " << search::status_name(result.outcome.status)
              << ", evaluations: " << result.outcome.evaluations << ", wall-time: "
              << elapsed << " ms\n";
    return result.outcome.status == search::OutcomeStatus::Reproduced ? 0 : 2;
}

int cmd_experiment(const std::vector<std::string>& bundle_dirs,
                   const std::vector<std::string>& mode_names, std::size_t reps,
                   const CommonFlags& flags, const std::string& out_dir) {
    harness::ExperimentConfig config;
    for (const auto& dir : bundle_dirs)
        config.scenarios.push_back(harness::load_bundle(dir));
    for (const auto& name : mode_names) config.modes.push_back(harness::parse_mode(name));
    config.repetitions = reps;
    config.seed_base = flags.seed;
    config.base = flags.to_config();

    auto start = std::chrono::steady_clock::now();
    auto report = harness::run_experiment(config);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();

    fs::path out = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    write_file(out / "report.csv", report.csv);
    write_file(out / "report.json", report.json.dump(2) + "\n");
    std::cerr << "wall-time: " << elapsed << " ms\n";
    return 0;
}

int cmd_run_test(const std::string& bundle_dir, const std::string& test_path) {
    auto bundle = harness::load_bundle(bundle_dir);
    auto test = sut::parse_test(read_file(test_path), fs::path(test_path).stem().string());
    auto result = sut::execute_test(bundle.program, test);
    if (result.thrown)
        std::cout << sut::format_thrown(*result.thrown);
    else
        std::cout << "no exception\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search-based crash reproduction for the bundled mini-language"};
    app.require_subcommand(1);

    std::string bundle_dir, out_dir, models_dir, test_path;
    std::vector<std::string> bundle_dirs;
    std::vector<std::string> modes = {"none", "test", "model"};
    std::size_t reps = 1;
    CommonFlags flags;

    auto* analyze = app.add_subcommand("analyze", "Dump static+dynamic call sequences");
    analyze->add_option("bundle", bundle_dir, "Scenario directory")->required();
    analyze->add_option("--out", out_dir, "Output directory (default: stdout)");

    auto* infer = app.add_subcommand("infer-models", "Infer per-class transition systems");
    infer->add_option("bundle", bundle_dir, "Scenario directory")->required();
    infer->add_option("--out", out_dir, "Output directory (default: <bundle>/models)");

    auto* reproduce = app.add_subcommand("reproduce", "Search for a crash-reproducing test");
    reproduce->add_option("bundle", bundle_dir, "Scenario directory")->required();
    reproduce->add_option("--models", models_dir, "Prebuilt model directory");
    reproduce->add_option("--out", out_dir, "Output directory (default: out)");
    flags.attach(reproduce);

    auto* experiment = app.add_subcommand("experiment", "Scenarios x modes x repetitions");
    experiment->add_option("bundles", bundle_dirs, "Scenario directories")->required();
    experiment->add_option("--modes", modes, "Seeding modes to compare (first = baseline)")
        ->delimiter(',');
    experiment->add_option("--reps", reps, "Repetitions per cell");
    experiment->add_option("--out", out_dir, "Output directory (default: out)");
    flags.attach(experiment);

    auto* run_test = app.add_subcommand("run-test", "Execute one test, print its trace");
    run_test->add_option("bundle", bundle_dir, "Scenario directory")->required();
    run_test->add_option("test", test_path, "Test file (.sut-test)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(bundle_dir, out_dir);
        if (infer->parsed()) return cmd_infer_models(bundle_dir, out_dir);
        if (reproduce->parsed()) return cmd_reproduce(bundle_dir, flags, models_dir, out_dir);
        if (experiment->parsed())
            return cmd_experiment(bundle_dirs, modes, reps, flags, out_dir);
        if (run_test->parsed()) return cmd_run_test(bundle_dir, test_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
