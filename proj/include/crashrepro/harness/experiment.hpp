#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "crashrepro/analysis/sequences.hpp"
#include "crashrepro/behmodel/transition_system.hpp"
#include "crashrepro/harness/bundle.hpp"
#include "crashrepro/search/ga.hpp"

namespace crashrepro::harness {

std::string mode_name(search::SeedingMode mode);
search::SeedingMode parse_mode(const std::string& name);

/// Static plus dynamic call sequences for every program class, merged into
/// one transition system per class that has any observed behavior.
std::map<std::string, behmodel::TransitionSystem> infer_models(
    const sut::Program& program, const std::vector<sut::TestCase>& tests,
    std::vector<std::string>* warnings = nullptr);

struct PipelineResult {
    search::SearchOutcome outcome;
    seeding::ObjectPool pool;
    std::vector<std::string> warnings;
};

/// One crash-reproduction run: sequences, models and pool as the seeding
/// mode demands, then the guided search. Prebuilt models skip inference.
PipelineResult run_pipeline(
    const ScenarioBundle& bundle, const search::SearchConfig& config,
    const std::map<std::string, behmodel::TransitionSystem>* prebuilt_models = nullptr);

/// Deterministic run summary: status, fitness breakdown, evaluation counts,
/// the best test, and the effective configuration. Wall time is deliberately
/// absent so repeated runs serialize identically.
nlohmann::json outcome_json(const search::SearchOutcome& outcome,
                            const search::SearchConfig& config);

struct ExperimentConfig {
    std::vector<ScenarioBundle> scenarios;
    std::vector<search::SeedingMode> modes;  // first mode is the A12 baseline
    std::size_t repetitions = 1;
    std::uint64_t seed_base = 1;
    search::SearchConfig base;
};

struct ExperimentReport {
    std::string csv;
    nlohmann::json json;
};

/// Runs scenarios x modes x repetitions sequentially with derived seeds
/// seed-base + repetition; emits per-run rows plus per-(scenario, mode)
/// aggregates.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace crashrepro::harness
