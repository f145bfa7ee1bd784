#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crashrepro/search/operators.hpp"

namespace crashrepro::search {

enum class OutcomeStatus { NotStarted, LineNotReached, LineReached, ExceptionThrown, Reproduced };

std::string status_name(OutcomeStatus status);

struct SearchOutcome {
    OutcomeStatus status = OutcomeStatus::NotStarted;
    std::optional<sut::TestCase> best_test;
    FitnessBreakdown best;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
    // One line per generation: gen, best total, d_l, d_e, d_s, evaluations.
    std::string search_log;
    std::size_t pool_draws_init = 0;
    std::size_t pool_draws_mut = 0;
};

SearchOutcome run_search(const sut::Program& program, const CrashTarget& target,
                         const seeding::ObjectPool& pool, const SearchConfig& config);

}  // namespace crashrepro::search
