#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "crashrepro/analysis/carving.hpp"
#include "crashrepro/behmodel/transition_system.hpp"
#include "crashrepro/seeding/concretize.hpp"
#include "crashrepro/seeding/dissimilarity.hpp"
#include "crashrepro/sutlang/stacktrace.hpp"
#include "crashrepro/sutlang/testcase.hpp"

namespace crashrepro::seeding {

struct SeedingConfig {
    double pick_init = 0.8;
    double pick_mut = 0.3;
    double clone = 0.5;
    std::size_t behaviors_per_model = 100;  // k, matched to the population size
    std::size_t n_conc = 1;
    std::size_t candidate_multiplier = kCandidateMultiplier;
};

struct ObjectPool {
    std::map<std::string, std::vector<Fragment>> entries;
    std::vector<sut::TestCase> cloned_tests;  // test-seeding mode only
    std::vector<std::string> warnings;
    // How many times the search actually sampled from the pool.
    mutable std::size_t draws = 0;

    bool has_fragments_for(const std::string& cls) const;
    const Fragment& sample_fragment(const std::string& cls, behmodel::Rng& rng) const;
};

using ModelMap = std::map<std::string, behmodel::TransitionSystem>;

/// Pool for model seeding: for every program class and every class named in
/// the crash trace that has a non-empty model, select dissimilar behaviors
/// and concretize each into fragments.
ObjectPool build_model_pool(const ModelMap& models, const sut::CrashReport& crash,
                            const sut::Program& program, const SeedingConfig& config,
                            behmodel::Rng& rng);

/// Pool for test seeding: carved object fragments plus cloned tests.
ObjectPool build_test_pool(const sut::Program& program,
                           const std::vector<sut::TestCase>& tests,
                           const std::string& target_class);

/// Debug dump: one block per entry with class, provenance, and the fragment
/// rendered as test text.
std::string format_pool(const ObjectPool& pool);

}  // namespace crashrepro::seeding
