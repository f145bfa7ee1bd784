#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "crashrepro/sutlang/ast.hpp"
#include "crashrepro/sutlang/interpreter.hpp"
#include "crashrepro/sutlang/testcase.hpp"

namespace crashrepro::analysis {

enum class SequenceOrigin { Static, Dynamic };

struct CallSequence {
    std::string class_name;
    std::vector<std::string> actions;  // constructors appear as "<init>/arity"
    SequenceOrigin origin = SequenceOrigin::Static;

    bool operator==(const CallSequence&) const = default;
    auto operator<=>(const CallSequence&) const = default;
};

using SequenceMap = std::map<std::string, std::set<CallSequence>>;

/// At most this many control-flow paths are enumerated per method body;
/// further branch combinations are dropped (collector.warnings notes it).
inline constexpr int kMaxPathsPerMethod = 256;

struct CollectionLog {
    std::vector<std::string> warnings;
};

/// Intraprocedural static collection: per method, acyclic CFG paths with
/// each loop body taken exactly once on the true branch; per object track,
/// one sequence per path.
SequenceMap collect_static_sequences(const sut::Program& program, CollectionLog* log = nullptr);

/// Interprocedural dynamic collection: executes every test that statically
/// references a relevant class; per object identity, its full call-event
/// subsequence becomes one sequence.
SequenceMap collect_dynamic_sequences(const sut::Program& program,
                                      const std::vector<sut::TestCase>& tests,
                                      const std::set<std::string>& relevant_classes,
                                      CollectionLog* log = nullptr,
                                      long step_limit = sut::kDefaultStepLimit);

/// True when the test text mentions any of the classes (constructions at
/// harness level).
bool test_references_class(const sut::TestCase& test, const std::set<std::string>& classes);

/// Dump format: one line per sequence "class<TAB>origin<TAB>m1,m2,...",
/// lexicographically ordered.
std::string format_sequences(const SequenceMap& sequences);
SequenceMap parse_sequences(const std::string& text);

}  // namespace crashrepro::analysis
