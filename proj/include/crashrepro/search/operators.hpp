#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "crashrepro/search/fitness.hpp"
#include "crashrepro/seeding/object_pool.hpp"

namespace crashrepro::search {

enum class SeedingMode { None, Test, Model };

struct SearchConfig {
    std::size_t population_size = 100;
    std::size_t budget = 62328;  // fitness evaluations
    std::size_t max_test_length = 40;
    std::size_t tournament_size = 2;
    std::size_t elitism = 1;
    double crossover_probability = 0.75;
    // Negative means the default per-statement rate of 1/length.
    double mutation_rate = -1.0;
    SeedingMode mode = SeedingMode::None;
    seeding::SeedingConfig seeding;
    std::uint64_t seed = 1;
    long step_limit = sut::kDefaultStepLimit;
    std::size_t construction_attempts = 50;
};

/// Shared state for the guided operators. The pool-draw counters record how
/// often seeded material was actually consulted.
struct OperatorContext {
    const sut::Program& program;
    const CrashTarget& target;
    const seeding::ObjectPool& pool;
    const SearchConfig& config;
    behmodel::Rng& rng;
    std::size_t pool_draws_init = 0;
    std::size_t pool_draws_mut = 0;
};

double rand_unit(behmodel::Rng& rng);

/// Index of the last call to the target method on a receiver of the target
/// class, or -1 when the test has none.
int target_call_index(const sut::TestCase& test, const CrashTarget& target);

/// True when the execution never actually invoked the target call: a harness
/// failure, or any exception raised by an earlier statement.
bool construction_failed(const sut::ExecutionResult& result, const sut::TestCase& test,
                         const CrashTarget& target);

/// Repairs a test in place: drops statements with undefined variables,
/// enforces the length bound (truncating from the front), guarantees a
/// target-method call, and renumbers statement lines.
void normalize(sut::TestCase& test, OperatorContext& ctx, bool for_init = true);

/// One fresh individual: either a mutated clone of an existing test (test
/// seeding, with probability Pr[clone]) or a synthesized random test ending
/// in the target call. Objects come from the pool with Pr[pick init].
sut::TestCase build_individual(OperatorContext& ctx);

std::pair<sut::TestCase, sut::TestCase> guided_crossover(const sut::TestCase& parent1,
                                                         const sut::TestCase& parent2,
                                                         OperatorContext& ctx);

sut::TestCase guided_mutation(const sut::TestCase& test, OperatorContext& ctx);

}  // namespace crashrepro::search
