#include "crashrepro/search/ga.hpp"

#include <algorithm>
#include <cstdio>

namespace crashrepro::search {

std::string status_name(OutcomeStatus status) {
    switch (status) {
        case OutcomeStatus::NotStarted: return "not-started";
        case OutcomeStatus::LineNotReached: return "line-not-reached";
        case OutcomeStatus::LineReached: return "line-reached";
        case OutcomeStatus::ExceptionThrown: return "exception-thrown";
        case OutcomeStatus::Reproduced: return "reproduced";
    }
    return "unknown";
}

namespace {

struct Individual {
    sut::TestCase test;
    FitnessBreakdown fit;
};

void log_generation(std::string& log, std::size_t gen, const FitnessBreakdown& best,
                    std::size_t evals) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu\t%.6g\t%.6g\t%.6g\t%.6g\t%zu\n", gen, best.total,
                  best.d_l, best.d_e, best.d_s, evals);
    log += buf;
}

std::size_t tournament(const std::vector<Individual>& pop, const SearchConfig& config,
                       behmodel::Rng& rng) {
    std::size_t best = rng() % pop.size();
    for (std::size_t i = 1; i < config.tournament_size; ++i) {
        std::size_t cand = rng() % pop.size();
        if (pop[cand].fit.total < pop[best].fit.total) best = cand;
    }
    return best;
}

}  // namespace

SearchOutcome run_search(const sut::Program& program, const CrashTarget& target,
                         const seeding::ObjectPool& pool, const SearchConfig& config) {
    behmodel::Rng rng(config.seed);
    OperatorContext ctx{program, target, pool, config, rng};
    SearchOutcome outcome;

    std::vector<Individual> pop;
    std::size_t evals = 0;

    // Guided initialization. Construction probes are plain executions; only
    // successfully constructed individuals consume fitness evaluations.
    for (std::size_t i = 0; i < config.population_size && evals < config.budget; ++i) {
        for (std::size_t attempt = 0; attempt < config.construction_attempts; ++attempt) {
            sut::TestCase t = build_individual(ctx);
            auto result = sut::execute_test(program, t, config.step_limit);
            if (construction_failed(result, t, target)) continue;
            ++evals;
            Individual ind{std::move(t), assess(result, target)};
            if (!outcome.best_test || ind.fit.total < outcome.best.total) {
                outcome.best_test = ind.test;
                outcome.best = ind.fit;
            }
            pop.push_back(std::move(ind));
            break;
        }
    }

    outcome.pool_draws_init = ctx.pool_draws_init;
    outcome.pool_draws_mut = ctx.pool_draws_mut;
    outcome.evaluations = evals;
    if (pop.empty()) {
        outcome.status = OutcomeStatus::NotStarted;
        return outcome;
    }

    std::size_t gen = 0;
    log_generation(outcome.search_log, gen, outcome.best, evals);

    while (outcome.best.total > 0.0 && evals < config.budget) {
        ++gen;
        std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
            return a.fit.total < b.fit.total;
        });
        std::vector<Individual> next;
        for (std::size_t i = 0; i < config.elitism && i < pop.size(); ++i)
            next.push_back(pop[i]);

        while (next.size() < config.population_size && evals < config.budget &&
               outcome.best.total > 0.0) {
            const Individual& p1 = pop[tournament(pop, config, rng)];
            const Individual& p2 = pop[tournament(pop, config, rng)];
            sut::TestCase c1 = p1.test, c2 = p2.test;
            if (rand_unit(rng) < config.crossover_probability) {
                auto [a, b] = guided_crossover(p1.test, p2.test, ctx);
                c1 = std::move(a);
                c2 = std::move(b);
            }
            for (sut::TestCase* c : {&c1, &c2}) {
                if (next.size() >= config.population_size || evals >= config.budget) break;
                sut::TestCase m = guided_mutation(*c, ctx);
                auto result = sut::execute_test(program, m, config.step_limit);
                ++evals;
                FitnessBreakdown fit = construction_failed(result, m, target)
                                           ? FitnessBreakdown::sentinel()
                                           : assess(result, target);
                Individual ind{std::move(m), fit};
                if (ind.fit.total < outcome.best.total) {
                    outcome.best_test = ind.test;
                    outcome.best = ind.fit;
                }
                next.push_back(std::move(ind));
                if (outcome.best.total == 0.0) break;
            }
        }
        if (next.size() > config.elitism) pop.swap(next);
        log_generation(outcome.search_log, gen, outcome.best, evals);
    }

    outcome.generations = gen;
    outcome.evaluations = evals;
    outcome.pool_draws_init = ctx.pool_draws_init;
    outcome.pool_draws_mut = ctx.pool_draws_mut;

    if (outcome.best.total == 0.0)
        outcome.status = OutcomeStatus::Reproduced;
    else if (outcome.best.d_e == 0.0)
        outcome.status = OutcomeStatus::ExceptionThrown;
    else if (outcome.best.d_l == 0.0)
        outcome.status = OutcomeStatus::LineReached;
    else
        outcome.status = OutcomeStatus::LineNotReached;
    return outcome;
}

}  // namespace crashrepro::search
