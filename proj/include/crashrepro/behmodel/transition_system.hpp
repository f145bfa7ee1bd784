#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crashrepro/analysis/sequences.hpp"

namespace crashrepro::behmodel {

/// Rng used across the engine; seeded explicitly for reproducibility.
using Rng = std::mt19937_64;

inline constexpr const char* kInitialState = "s0";
inline constexpr int kDefaultMaxPathLength = 20;

/// One path through a class's transition system, prior to concretization.
struct AbstractObjectBehavior {
    std::string class_name;
    std::vector<std::string> actions;

    bool operator==(const AbstractObjectBehavior&) const = default;
    auto operator<=>(const AbstractObjectBehavior&) const = default;
};

/// Deterministic 2-gram usage model. State identity is the previously
/// executed action name; s0 is the distinguished initial state.
class TransitionSystem {
public:
    TransitionSystem() = default;
    explicit TransitionSystem(std::string class_name) : class_name_(std::move(class_name)) {}

    const std::string& class_name() const { return class_name_; }
    const std::set<std::string>& states() const { return states_; }
    const std::set<std::string>& terminal_states() const { return terminals_; }
    int gram_order() const { return 2; }

    bool empty() const { return transition_count_ == 0; }
    size_t state_count() const { return states_.size(); }
    size_t transition_count() const { return transition_count_; }

    /// Outgoing actions of a state, lexicographically ordered. The
    /// destination of action `a` is always state(a).
    const std::vector<std::string>& outgoing(const std::string& state) const;

    bool has_transition(const std::string& from, const std::string& action) const;
    bool is_terminal(const std::string& state) const { return terminals_.count(state) > 0; }

    void add_sequence(const std::vector<std::string>& actions);

    // Low-level construction, used by deserialization.
    void add_transition(const std::string& from, const std::string& action);
    void mark_terminal(const std::string& state);

private:
    std::string class_name_;
    std::set<std::string> states_{kInitialState};
    std::set<std::string> terminals_;
    std::map<std::string, std::vector<std::string>> outgoing_;  // sorted action lists
    size_t transition_count_ = 0;
};

struct ModelStats {
    size_t state_count = 0;
    size_t transition_count = 0;
    size_t bfs_height = 0;  // max breadth-first depth from s0
};

/// 2-gram inference over a class's call sequences; pure function of the
/// sequence set (order-independent).
TransitionSystem infer_model(const std::string& class_name,
                             const std::set<analysis::CallSequence>& sequences);

/// Prefix acceptance: true iff the sequence traces a path from s0. Unknown
/// actions return false; the empty sequence is accepted.
bool accepts(const TransitionSystem& model, const std::vector<std::string>& actions);

ModelStats model_stats(const TransitionSystem& model);

/// Uniform random walk from s0; stops with probability 0.5 at terminal
/// states, at dead ends, or at max_length. Throws std::invalid_argument on
/// an empty model or max_length < 1.
AbstractObjectBehavior random_path(const TransitionSystem& model, int max_length, Rng& rng);

/// Deterministic text serialization: header lines with class name and
/// terminal states, then one transition per line "from<TAB>action<TAB>to",
/// lexicographically ordered.
std::string format_model(const TransitionSystem& model);
TransitionSystem parse_model(const std::string& text);

}  // namespace crashrepro::behmodel
