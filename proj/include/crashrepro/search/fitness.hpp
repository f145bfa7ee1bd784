#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "crashrepro/sutlang/interpreter.hpp"
#include "crashrepro/sutlang/stacktrace.hpp"

namespace crashrepro::search {

/// The crash to reproduce, precomputed from a report: the frame at the
/// selected level names the target class/method/line, and the frames from
/// the innermost up to that level must all appear in the generated trace.
struct CrashTarget {
    sut::CrashReport report;
    std::string target_class;
    std::string target_method;
    int target_line = 0;
    std::vector<sut::Frame> required_frames;  // innermost first

    static CrashTarget from_report(const sut::CrashReport& report);
};

/// Weighted crash-reproduction fitness: total = 3*d_l + 2*d_e + d_s.
/// 0.0 means the crash is fully reproduced; 6.0 is the sentinel for an
/// individual that could not be constructed at all.
struct FitnessBreakdown {
    double d_l = 1.0;
    double d_e = 1.0;
    double d_s = 1.0;
    double total = 6.0;

    static FitnessBreakdown sentinel() { return {}; }
};

/// Frames of a thrown exception with the harness pseudo-frames stripped,
/// innermost first.
std::vector<sut::Frame> program_frames(const sut::ThrownInfo& thrown);

/// 0 when the target line executed; otherwise scaled by how close the
/// execution came within the target method, or 1 if it was never entered.
double compute_line_distance(const sut::ExecutionResult& result, const CrashTarget& target);

/// 0 only when the target line executed and the right exception type was
/// thrown with its origin at the required innermost frame.
double compute_exception_distance(const sut::ExecutionResult& result,
                                  const CrashTarget& target, double d_l);

/// Mean per-frame distance of the generated trace against the required
/// frames; forced to 1 while the exception distance is unsatisfied.
double compute_stack_distance(const sut::ExecutionResult& result, const CrashTarget& target,
                              double d_e);

/// All three components from one execution result.
FitnessBreakdown assess(const sut::ExecutionResult& result, const CrashTarget& target);

/// Executes the test once and scores it; bumps the evaluation counter.
FitnessBreakdown fitness(const sut::TestCase& test, const sut::Program& program,
                         const CrashTarget& target, std::size_t* evaluations = nullptr,
                         long step_limit = sut::kDefaultStepLimit);

}  // namespace crashrepro::search
