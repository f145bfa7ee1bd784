#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crashrepro/sutlang/ast.hpp"
#include "crashrepro/sutlang/interpreter.hpp"

namespace crashrepro::sut {

struct Frame {
    std::string cls;
    std::string method;
    std::string file;
    int line = 0;

    bool operator==(const Frame&) const = default;
};

struct CrashReport {
    std::string exception_type;
    std::string message;
    std::vector<Frame> frames;  // innermost first
    int target_frame_level = 1; // 1-based, <= frames.size()
};

/// Wire format, bit-exact:
///   ExceptionType: message      (": message" omitted when empty)
///   \tat Class.method(File:LINE)
CrashReport parse_stack_trace(const std::string& text, int target_frame_level);
std::string format_stack_trace(const CrashReport& report);

/// Formats the trace of an execution's thrown exception in the wire format.
std::string format_thrown(const ThrownInfo& thrown);

/// Checks that the target frame's class exists in the program, that the
/// target method exists, and that the target line is a real line of it.
void validate_report(const CrashReport& report, const Program& program);

}  // namespace crashrepro::sut
