#include "crashrepro/sutlang/stacktrace.hpp"

#include <sstream>

namespace crashrepro::sut {

namespace {

// One frame line: "\tat Class.method(File:LINE)".  Method may be <init>.
Frame parse_frame_line(const std::string& line, int line_no) {
    auto fail = [&](const std::string& what) -> Frame {
        throw ParseError("malformed stack-trace line: " + what, "stack-trace", line_no);
    };
    if (line.size() < 4 || line.compare(0, 4, "\tat ") != 0) return fail("missing '\\tat '");
    std::string rest = line.substr(4);
    size_t open = rest.find('(');
    size_t close = rest.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        return fail("missing location");
    std::string qualified = rest.substr(0, open);
    std::string location = rest.substr(open + 1, close - open - 1);
    size_t dot = qualified.rfind('.');
    if (dot == std::string::npos) return fail("missing method");
    size_t colon = location.rfind(':');
    if (colon == std::string::npos) return fail("missing line number");
    Frame f;
    f.cls = qualified.substr(0, dot);
    f.method = qualified.substr(dot + 1);
    f.file = location.substr(0, colon);
    try {
        f.line = std::stoi(location.substr(colon + 1));
    } catch (const std::exception&) {
        return fail("bad line number");
    }
    if (f.cls.empty() || f.method.empty()) return fail("empty class or method");
    return f;
}

}  // namespace

CrashReport parse_stack_trace(const std::string& text, int target_frame_level) {
    CrashReport report;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            size_t colon = line.find(": ");
            if (line[0] == '\t') throw ParseError("missing header line", "stack-trace", line_no);
            if (colon == std::string::npos) {
                report.exception_type = line;
            } else {
                report.exception_type = line.substr(0, colon);
                report.message = line.substr(colon + 2);
            }
            have_header = true;
            continue;
        }
        report.frames.push_back(parse_frame_line(line, line_no));
    }
    if (!have_header) throw ParseError("empty stack trace", "stack-trace", 0);
    if (report.frames.empty()) throw ParseError("stack trace has no frames", "stack-trace", 0);
    if (target_frame_level < 1 || target_frame_level > (int)report.frames.size())
        throw ParseError("target frame out of range", "stack-trace", 0);
    report.target_frame_level = target_frame_level;
    return report;
}

std::string format_stack_trace(const CrashReport& report) {
    std::ostringstream out;
    out << report.exception_type;
    if (!report.message.empty()) out << ": " << report.message;
    out << "\n";
    for (const auto& f : report.frames)
        out << "\tat " << f.cls << "." << f.method << "(" << f.file << ":" << f.line << ")\n";
    return out.str();
}

std::string format_thrown(const ThrownInfo& thrown) {
    CrashReport report;
    report.exception_type = thrown.type;
    report.message = thrown.message;
    for (const auto& f : thrown.frames) report.frames.push_back({f.cls, f.method, f.file, f.line});
    report.target_frame_level = 1;
    return format_stack_trace(report);
}

namespace {

bool method_has_line(const MethodDef& m, int line);

bool block_has_line(const std::vector<StmtPtr>& body, int line) {
    for (const auto& s : body) {
        if (s->line == line) return true;
        if (block_has_line(s->body, line)) return true;
        if (block_has_line(s->else_body, line)) return true;
    }
    return false;
}

bool method_has_line(const MethodDef& m, int line) { return block_has_line(m.body, line); }

}  // namespace

void validate_report(const CrashReport& report, const Program& program) {
    const Frame& target = report.frames[report.target_frame_level - 1];
    const ClassDef* cls = program.find_class(target.cls);
    if (!cls)
        throw ParseError("target frame class '" + target.cls + "' not in program", "stack-trace",
                         0);
    bool found_line = false;
    if (target.method == "<init>") {
        for (const auto& c : cls->constructors) found_line |= method_has_line(c, target.line);
    } else {
        for (const auto& m : cls->methods)
            if (m.name == target.method) found_line |= method_has_line(m, target.line);
        if (cls->methods_named(target.method).empty())
            throw ParseError("target method '" + target.method + "' not in class " + target.cls,
                             "stack-trace", 0);
    }
    if (!found_line)
        throw ParseError("target line " + std::to_string(target.line) + " not in " + target.cls +
                             "." + target.method,
                         "stack-trace", 0);
}

}  // namespace crashrepro::sut
