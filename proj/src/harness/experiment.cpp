#include "crashrepro/harness/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "crashrepro/harness/stats.hpp"
#include "crashrepro/sutlang/stacktrace.hpp"

namespace crashrepro::harness {

std::string mode_name(search::SeedingMode mode) {
    switch (mode) {
        case search::SeedingMode::None: return "none";
        case search::SeedingMode::Test: return "test";
        case search::SeedingMode::Model: return "model";
    }
    return "unknown";
}

search::SeedingMode parse_mode(const std::string& name) {
    if (name == "none") return search::SeedingMode::None;
    if (name == "test") return search::SeedingMode::Test;
    if (name == "model") return search::SeedingMode::Model;
    throw std::invalid_argument("unknown seeding mode: " + name);
}

std::map<std::string, behmodel::TransitionSystem> infer_models(
    const sut::Program& program, const std::vector<sut::TestCase>& tests,
    std::vector<std::string>* warnings) {
    analysis::CollectionLog log;
    auto sequences = analysis::collect_static_sequences(program, &log);
    std::set<std::string> classes;
    for (const auto& [name, cd] : program.classes) classes.insert(name);
    auto dynamic = analysis::collect_dynamic_sequences(program, tests, classes, &log);
    for (auto& [cls, seqs] : dynamic) sequences[cls].insert(seqs.begin(), seqs.end());

    std::map<std::string, behmodel::TransitionSystem> models;
    for (const auto& [cls, seqs] : sequences)
        if (!seqs.empty()) models.emplace(cls, behmodel::infer_model(cls, seqs));
    if (warnings)
        warnings->insert(warnings->end(), log.warnings.begin(), log.warnings.end());
    return models;
}

PipelineResult run_pipeline(
    const ScenarioBundle& bundle, const search::SearchConfig& config,
    const std::map<std::string, behmodel::TransitionSystem>* prebuilt_models) {
    PipelineResult result;
    auto target = search::CrashTarget::from_report(bundle.crash);

    if (config.mode == search::SeedingMode::Model) {
        std::map<std::string, behmodel::TransitionSystem> models;
        if (prebuilt_models)
            models = *prebuilt_models;
        else
            models = infer_models(bundle.program, bundle.tests, &result.warnings);
        // The pool gets its own stream so search draws are unaffected by how
        // many random numbers pool construction consumed.
        behmodel::Rng pool_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
        result.pool = seeding::build_model_pool(models, bundle.crash, bundle.program,
                                                config.seeding, pool_rng);
    } else if (config.mode == search::SeedingMode::Test) {
        result.pool =
            seeding::build_test_pool(bundle.program, bundle.tests, target.target_class);
    }
    result.warnings.insert(result.warnings.end(), result.pool.warnings.begin(),
                           result.pool.warnings.end());

    result.outcome = search::run_search(bundle.program, target, result.pool, config);
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

nlohmann::json outcome_json(const search::SearchOutcome& outcome,
                            const search::SearchConfig& config) {
    nlohmann::json j;
    j["status"] = search::status_name(outcome.status);
    j["fitness"] = {{"d_l", outcome.best.d_l},
                    {"d_e", outcome.best.d_e},
                    {"d_s", outcome.best.d_s},
                    {"total", outcome.best.total}};
    j["evaluations"] = outcome.evaluations;
    j["generations"] = outcome.generations;
    j["pool-draws"] = {{"initialization", outcome.pool_draws_init},
                       {"mutation", outcome.pool_draws_mut}};
    if (outcome.best_test)
        j["best-test"] = sut::format_test(*outcome.best_test);
    else
        j["best-test"] = nullptr;
    j["config"] = {{"population", config.population_size},
                   {"budget", config.budget},
                   {"max-test-length", config.max_test_length},
                   {"tournament-size", config.tournament_size},
                   {"elitism", config.elitism},
                   {"crossover-probability", config.crossover_probability},
                   {"mutation-rate",
                    config.mutation_rate < 0.0 ? nlohmann::json("1/length")
                                               : nlohmann::json(config.mutation_rate)},
                   {"seeding-mode", mode_name(config.mode)},
                   {"pick-init", config.seeding.pick_init},
                   {"pick-mut", config.seeding.pick_mut},
                   {"clone", config.seeding.clone},
                   {"behaviors-per-model", config.seeding.behaviors_per_model},
                   {"concretizations-per-behavior", config.seeding.n_conc},
                   {"candidate-multiplier", config.seeding.candidate_multiplier},
                   {"seed", config.seed}};
    return j;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.repetitions == 0) throw std::invalid_argument("repetitions must be >= 1");
    if (config.scenarios.empty()) throw std::invalid_argument("no scenarios");
    if (config.modes.empty()) throw std::invalid_argument("no seeding modes");

    struct Cell {
        std::vector<search::SearchOutcome> runs;
    };
    std::map<std::pair<std::string, std::string>, Cell> cells;

    std::string csv =
        "# aggregate a12-evals-vs-baseline: probability that this mode's evaluation "
        "count is lower than the first mode's (>0.5 means fewer evaluations)\n";
    csv += "scenario,mode,rep,seed,status,total,d_l,d_e,d_s,evaluations\n";
    nlohmann::json runs_json = nlohmann::json::array();

    for (const auto& bundle : config.scenarios) {
        // Models are inferred once per scenario and shared across runs.
        std::map<std::string, behmodel::TransitionSystem> models;
        bool need_models = std::any_of(
            config.modes.begin(), config.modes.end(),
            [](search::SeedingMode m) { return m == search::SeedingMode::Model; });
        if (need_models) models = infer_models(bundle.program, bundle.tests);

        for (auto mode : config.modes) {
            for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                search::SearchConfig run_config = config.base;
                run_config.mode = mode;
                run_config.seed = config.seed_base + rep;
                apply_settings(run_config, bundle.settings);

                auto result = run_pipeline(bundle, run_config, &models);
                const auto& outcome = result.outcome;
                csv += bundle.name + "," + mode_name(mode) + "," + std::to_string(rep) +
                       "," + std::to_string(run_config.seed) + "," +
                       search::status_name(outcome.status) + "," +
                       fmt(outcome.best.total) + "," + fmt(outcome.best.d_l) + "," +
                       fmt(outcome.best.d_e) + "," + fmt(outcome.best.d_s) + "," +
                       std::to_string(outcome.evaluations) + "\n";

                nlohmann::json row = outcome_json(outcome, run_config);
                row["scenario"] = bundle.name;
                row["mode"] = mode_name(mode);
                row["rep"] = rep;
                runs_json.push_back(std::move(row));

                cells[{bundle.name, mode_name(mode)}].runs.push_back(outcome);
            }
        }
    }

    csv += "scenario,mode,runs,reproduced-ratio,majority-outcome,mean-evaluations,"
           "a12-evals-vs-baseline\n";
    nlohmann::json aggregates = nlohmann::json::array();
    std::string baseline = mode_name(config.modes.front());

    for (const auto& bundle : config.scenarios) {
        for (auto mode : config.modes) {
            const auto& runs = cells.at({bundle.name, mode_name(mode)}).runs;
            std::size_t reproduced = 0;
            double evals_sum = 0;
            std::map<search::OutcomeStatus, std::size_t> counts;
            std::vector<double> evals;
            for (const auto& o : runs) {
                if (o.status == search::OutcomeStatus::Reproduced) ++reproduced;
                ++counts[o.status];
                evals_sum += (double)o.evaluations;
                evals.push_back((double)o.evaluations);
            }
            search::OutcomeStatus majority = runs.front().status;
            std::size_t best_count = 0;
            for (const auto& [status, count] : counts)
                if (count >= best_count) {  // ties fall to the better status
                    best_count = count;
                    majority = status;
                }
            const auto& base_runs = cells.at({bundle.name, baseline}).runs;
            std::vector<double> base_evals;
            for (const auto& o : base_runs) base_evals.push_back((double)o.evaluations);
            double a12 = vargha_delaney_a12(evals, base_evals);
            double ratio = (double)reproduced / (double)runs.size();
            double mean = evals_sum / (double)runs.size();

            csv += bundle.name + "," + mode_name(mode) + "," +
                   std::to_string(runs.size()) + "," + fmt(ratio) + "," +
                   search::status_name(majority) + "," + fmt(mean) + "," + fmt(a12) +
                   "\n";
            aggregates.push_back({{"scenario", bundle.name},
                                  {"mode", mode_name(mode)},
                                  {"runs", runs.size()},
                                  {"reproduced-ratio", ratio},
                                  {"majority-outcome", search::status_name(majority)},
                                  {"mean-evaluations", mean},
                                  {"a12-evals-vs-baseline", a12}});
        }
    }

    ExperimentReport report;
    report.csv = std::move(csv);
    report.json["runs"] = std::move(runs_json);
    report.json["aggregates"] = std::move(aggregates);
    return report;
}

}  // namespace crashrepro::harness
