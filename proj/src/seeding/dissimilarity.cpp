#include "crashrepro/seeding/dissimilarity.hpp"

#include <algorithm>
#include <set>

namespace crashrepro::seeding {

double jaccard_distance(const behmodel::AbstractObjectBehavior& b1,
                        const behmodel::AbstractObjectBehavior& b2) {
    std::set<std::string> s1(b1.actions.begin(), b1.actions.end());
    std::set<std::string> s2(b2.actions.begin(), b2.actions.end());
    if (s1.empty() && s2.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& a : s1)
        if (s2.count(a)) ++common;
    std::size_t total = s1.size() + s2.size() - common;
    return 1.0 - (double)common / (double)total;
}

std::vector<behmodel::AbstractObjectBehavior> select_behaviors(
    const behmodel::TransitionSystem& model, std::size_t k, std::size_t max_length,
    behmodel::Rng& rng, std::vector<std::string>* warnings,
    std::size_t candidate_multiplier) {
    if (model.empty()) {
        if (warnings)
            warnings->push_back("empty model for class " + model.class_name() +
                                ", no behaviors selected");
        return {};
    }
    std::set<std::vector<std::string>> seen;
    for (std::size_t i = 0; i < candidate_multiplier * k; ++i)
        seen.insert(random_path(model, max_length, rng).actions);

    std::vector<behmodel::AbstractObjectBehavior> candidates;
    for (const auto& actions : seen)
        candidates.push_back({model.class_name(), actions});

    if (candidates.size() <= k) return candidates;

    // Greedy farthest-point selection. The set is seeded with a longest
    // candidate; ties fall to the lexicographically smallest, which the
    // sorted candidate order provides.
    std::vector<bool> taken(candidates.size(), false);
    std::vector<std::size_t> picked;
    std::size_t seed = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i].actions.size() > candidates[seed].actions.size()) seed = i;
    taken[seed] = true;
    picked.push_back(seed);

    std::vector<double> min_dist(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        min_dist[i] = jaccard_distance(candidates[i], candidates[seed]);

    while (picked.size() < k) {
        std::size_t best = candidates.size();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (taken[i]) continue;
            if (best == candidates.size() || min_dist[i] > min_dist[best]) best = i;
        }
        taken[best] = true;
        picked.push_back(best);
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (!taken[i])
                min_dist[i] = std::min(min_dist[i],
                                       jaccard_distance(candidates[i], candidates[best]));
    }

    std::sort(picked.begin(), picked.end());
    std::vector<behmodel::AbstractObjectBehavior> out;
    for (std::size_t i : picked) out.push_back(candidates[i]);
    return out;
}

}  // namespace crashrepro::seeding
