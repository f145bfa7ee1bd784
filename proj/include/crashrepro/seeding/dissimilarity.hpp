#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "crashrepro/behmodel/transition_system.hpp"

namespace crashrepro::seeding {

/// Jaccard dissimilarity over the action sets of two behaviors (order and
/// multiplicity ignored): 1 - |intersection| / |union|.
double jaccard_distance(const behmodel::AbstractObjectBehavior& b1,
                        const behmodel::AbstractObjectBehavior& b2);

inline constexpr std::size_t kCandidateMultiplier = 10;

/// Sample candidate_multiplier * k random paths from the model, then pick up
/// to k mutually dissimilar ones by greedy farthest-point selection: seed with
/// a longest candidate, then repeatedly add the candidate whose minimum
/// distance to the selected set is largest. Fewer than k distinct paths means
/// all distinct paths are returned.
std::vector<behmodel::AbstractObjectBehavior> select_behaviors(
    const behmodel::TransitionSystem& model, std::size_t k, std::size_t max_length,
    behmodel::Rng& rng, std::vector<std::string>* warnings = nullptr,
    std::size_t candidate_multiplier = kCandidateMultiplier);

}  // namespace crashrepro::seeding
