#include "crashrepro/search/fitness.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace crashrepro::search {

CrashTarget CrashTarget::from_report(const sut::CrashReport& report) {
    if (report.frames.empty()) throw std::invalid_argument("crash report has no frames");
    if (report.target_frame_level < 1 ||
        (std::size_t)report.target_frame_level > report.frames.size())
        throw std::invalid_argument("target frame level out of range");
    CrashTarget target;
    target.report = report;
    const sut::Frame& at = report.frames[(std::size_t)report.target_frame_level - 1];
    target.target_class = at.cls;
    target.target_method = at.method;
    target.target_line = at.line;
    target.required_frames.assign(report.frames.begin(),
                                  report.frames.begin() + report.target_frame_level);
    return target;
}

std::vector<sut::Frame> program_frames(const sut::ThrownInfo& thrown) {
    std::vector<sut::Frame> out;
    for (const auto& f : thrown.frames) {
        if (f.cls == sut::kHarnessClass && f.method == sut::kHarnessMethod) continue;
        out.push_back({f.cls, f.method, f.file, f.line});
    }
    return out;
}

double compute_line_distance(const sut::ExecutionResult& result, const CrashTarget& target) {
    bool entered = false;
    long best = -1;
    for (const auto& rec : result.executed_lines) {
        if (rec.cls != target.target_class || rec.method != target.target_method) continue;
        entered = true;
        if (rec.line == target.target_line) return 0.0;
        long g = std::labs((long)rec.line - (long)target.target_line);
        if (best < 0 || g < best) best = g;
    }
    if (!entered) return 1.0;
    return (double)best / (double)(best + 1);
}

double compute_exception_distance(const sut::ExecutionResult& result,
                                  const CrashTarget& target, double d_l) {
    if (d_l != 0.0) return 1.0;
    if (!result.thrown) return 1.0;
    if (result.thrown->type != target.report.exception_type) return 1.0;
    auto frames = program_frames(*result.thrown);
    if (frames.empty()) return 1.0;
    const sut::Frame& origin = target.required_frames.front();
    const sut::Frame& got = frames.front();
    if (got.cls != origin.cls || got.method != origin.method || got.line != origin.line)
        return 1.0;
    return 0.0;
}

double compute_stack_distance(const sut::ExecutionResult& result, const CrashTarget& target,
                              double d_e) {
    if (d_e != 0.0) return 1.0;
    auto frames = program_frames(*result.thrown);
    double sum = 0.0;
    std::size_t count = target.required_frames.size();
    for (std::size_t i = 0; i < count; ++i) {
        const sut::Frame& want = target.required_frames[i];
        if (i >= frames.size() || frames[i].cls != want.cls ||
            frames[i].method != want.method) {
            sum += 1.0;
            continue;
        }
        long g = std::labs((long)frames[i].line - (long)want.line);
        sum += (double)g / (double)(g + 1);
    }
    return sum / (double)count;
}

FitnessBreakdown assess(const sut::ExecutionResult& result, const CrashTarget& target) {
    FitnessBreakdown out;
    out.d_l = compute_line_distance(result, target);
    out.d_e = compute_exception_distance(result, target, out.d_l);
    out.d_s = compute_stack_distance(result, target, out.d_e);
    out.total = 3.0 * out.d_l + 2.0 * out.d_e + out.d_s;
    return out;
}

FitnessBreakdown fitness(const sut::TestCase& test, const sut::Program& program,
                         const CrashTarget& target, std::size_t* evaluations,
                         long step_limit) {
    auto result = sut::execute_test(program, test, step_limit);
    if (evaluations) ++*evaluations;
    return assess(result, target);
}

}  // namespace crashrepro::search
