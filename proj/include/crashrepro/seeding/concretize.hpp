#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crashrepro/behmodel/transition_system.hpp"
#include "crashrepro/sutlang/ast.hpp"
#include "crashrepro/sutlang/testcase.hpp"

namespace crashrepro::seeding {

enum class Provenance { ModelSeeded, Carved };

/// A replayable object-construction fragment: a constructor call followed by
/// method calls on the constructed object, possibly with nested constructions
/// for object-valued arguments.
struct Fragment {
    std::string class_name;
    std::string root_var;
    std::vector<sut::TStmt> stmts;
    Provenance provenance = Provenance::ModelSeeded;
};

inline constexpr int kMaxObjectDepth = 3;
inline constexpr int kConcretizeAttempts = 5;
inline constexpr std::size_t kStringPoolSize = 16;

/// The fixed pool random string arguments are drawn from.
const std::vector<std::string>& string_pool();

/// Uniform integer in [lo, hi] driven directly by the raw generator, so
/// results do not depend on the standard library's distribution algorithms.
long long rand_int(behmodel::Rng& rng, long long lo, long long hi);

/// Turn an abstract behavior into an executable fragment. The behavior's own
/// constructor is used when its first action is one; otherwise a random
/// declared constructor is called first. Remaining actions become method
/// calls with random arguments. The fragment is validated by replaying it;
/// statements past a thrown exception are cut off, and a replay that fails
/// outright is retried a few times before giving up.
std::optional<Fragment> concretize(const behmodel::AbstractObjectBehavior& behavior,
                                   const sut::Program& program, behmodel::Rng& rng,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace crashrepro::seeding
