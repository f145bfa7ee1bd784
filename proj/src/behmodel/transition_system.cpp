#include "crashrepro/behmodel/transition_system.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace crashrepro::behmodel {

const std::vector<std::string>& TransitionSystem::outgoing(const std::string& state) const {
    static const std::vector<std::string> kEmpty;
    auto it = outgoing_.find(state);
    return it == outgoing_.end() ? kEmpty : it->second;
}

bool TransitionSystem::has_transition(const std::string& from, const std::string& action) const {
    const auto& out = outgoing(from);
    return std::binary_search(out.begin(), out.end(), action);
}

void TransitionSystem::add_transition(const std::string& from, const std::string& action) {
    auto& out = outgoing_[from];
    auto it = std::lower_bound(out.begin(), out.end(), action);
    if (it == out.end() || *it != action) {
        out.insert(it, action);
        ++transition_count_;
    }
    states_.insert(from);
    states_.insert(action);
}

void TransitionSystem::mark_terminal(const std::string& state) { terminals_.insert(state); }

void TransitionSystem::add_sequence(const std::vector<std::string>& actions) {
    if (actions.empty()) return;
    std::string state = kInitialState;
    for (const auto& action : actions) {
        add_transition(state, action);
        state = action;  // to-state of action `a` is state(a)
    }
    terminals_.insert(state);
}

TransitionSystem infer_model(const std::string& class_name,
                             const std::set<analysis::CallSequence>& sequences) {
    TransitionSystem model(class_name);
    for (const auto& seq : sequences) model.add_sequence(seq.actions);
    return model;
}

bool accepts(const TransitionSystem& model, const std::vector<std::string>& actions) {
    std::string state = kInitialState;
    for (const auto& action : actions) {
        if (!model.has_transition(state, action)) return false;
        state = action;
    }
    return true;
}

ModelStats model_stats(const TransitionSystem& model) {
    ModelStats stats;
    stats.state_count = model.state_count();
    stats.transition_count = model.transition_count();
    std::map<std::string, size_t> depth;
    std::deque<std::string> queue;
    depth[kInitialState] = 0;
    queue.push_back(kInitialState);
    while (!queue.empty()) {
        std::string state = queue.front();
        queue.pop_front();
        for (const auto& action : model.outgoing(state)) {
            if (depth.count(action)) continue;
            depth[action] = depth[state] + 1;
            stats.bfs_height = std::max(stats.bfs_height, depth[action]);
            queue.push_back(action);
        }
    }
    return stats;
}

AbstractObjectBehavior random_path(const TransitionSystem& model, int max_length, Rng& rng) {
    if (max_length < 1) throw std::invalid_argument("max_length must be >= 1");
    if (model.empty()) throw std::invalid_argument("empty model");
    AbstractObjectBehavior behavior;
    behavior.class_name = model.class_name();
    std::string state = kInitialState;
    while ((int)behavior.actions.size() < max_length) {
        if (!behavior.actions.empty() && model.is_terminal(state)) {
            if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5) break;
        }
        const auto& out = model.outgoing(state);
        if (out.empty()) break;
        size_t pick = std::uniform_int_distribution<size_t>(0, out.size() - 1)(rng);
        behavior.actions.push_back(out[pick]);
        state = out[pick];
    }
    return behavior;
}

std::string format_model(const TransitionSystem& model) {
    std::ostringstream out;
    out << "class\t" << model.class_name() << "\n";
    out << "terminal";
    for (const auto& t : model.terminal_states()) out << "\t" << t;
    out << "\n";
    for (const auto& state : model.states())
        for (const auto& action : model.outgoing(state)) out << state << "\t" << action << "\t"
                                                             << action << "\n";
    return out.str();
}

TransitionSystem parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string class_name;
    std::vector<std::string> terminals;
    std::vector<std::pair<std::string, std::string>> transitions;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, '\t')) parts.push_back(field);
        if (parts.empty()) continue;
        if (parts[0] == "class") {
            if (parts.size() != 2)
                throw sut::ParseError("malformed class header", "model", line_no);
            class_name = parts[1];
        } else if (parts[0] == "terminal") {
            terminals.assign(parts.begin() + 1, parts.end());
        } else {
            if (parts.size() != 3 || parts[1] != parts[2])
                throw sut::ParseError("malformed transition line", "model", line_no);
            transitions.emplace_back(parts[0], parts[1]);
        }
    }
    if (class_name.empty()) throw sut::ParseError("model missing class header", "model", 0);
    TransitionSystem model(class_name);
    for (const auto& [from, action] : transitions) model.add_transition(from, action);
    for (const auto& t : terminals) {
        if (!model.states().count(t))
            throw sut::ParseError("terminal state '" + t + "' not in model", "model", 0);
        model.mark_terminal(t);
    }
    return model;
}

}  // namespace crashrepro::behmodel
