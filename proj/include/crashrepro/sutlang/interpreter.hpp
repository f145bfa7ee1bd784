#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crashrepro/sutlang/ast.hpp"
#include "crashrepro/sutlang/testcase.hpp"

namespace crashrepro::sut {

struct ObjectData;
using ObjRef = std::shared_ptr<ObjectData>;

struct Value {
    // monostate = null
    std::variant<std::monostate, long long, bool, std::string, ObjRef> v;

    bool is_null() const { return std::holds_alternative<std::monostate>(v); }
    bool is_int() const { return std::holds_alternative<long long>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_object() const { return std::holds_alternative<ObjRef>(v); }

    long long as_int() const { return std::get<long long>(v); }
    bool as_bool() const { return std::get<bool>(v); }
    const std::string& as_string() const { return std::get<std::string>(v); }
    const ObjRef& as_object() const { return std::get<ObjRef>(v); }
};

struct ObjectData {
    std::string cls;
    int id = 0;
    std::map<std::string, Value> fields;
};

struct StackFrame {
    std::string cls;
    std::string method;
    std::string file;
    int line = 0;

    bool operator==(const StackFrame&) const = default;
};

struct CallEvent {
    int object_id = 0;
    std::string cls;
    std::string action;  // "<init>/k" for constructors, method name otherwise

    bool operator==(const CallEvent&) const = default;
    auto operator<=>(const CallEvent&) const = default;
};

struct LineRecord {
    std::string cls;
    std::string method;
    int line = 0;

    bool operator==(const LineRecord&) const = default;
};

struct ThrownInfo {
    std::string type;
    std::string message;
    std::vector<StackFrame> frames;  // innermost first; never empty
};

struct ExecutionResult {
    std::vector<LineRecord> executed_lines;
    std::vector<CallEvent> call_events;
    std::optional<ThrownInfo> thrown;
    long steps_used = 0;
    // Shadow method-entry counter maintained at a separate code point from
    // call_events; tests cross-check the two.
    long shadow_entries = 0;
};

// Built-in exception type names.
inline constexpr const char* kNullDereference = "NullDereference";
inline constexpr const char* kDivideByZero = "DivideByZero";
inline constexpr const char* kBudgetExhausted = "BudgetExhausted";
inline constexpr const char* kHarnessError = "HarnessError";

inline constexpr long kDefaultStepLimit = 100000;

inline constexpr const char* kHarnessClass = "Test";
inline constexpr const char* kHarnessMethod = "test";

/// Deterministic execution of one test against a program. Never throws on
/// malformed tests: all failures surface as ExecutionResult::thrown.
ExecutionResult execute_test(const Program& program, const TestCase& test,
                             long step_limit = kDefaultStepLimit);

}  // namespace crashrepro::sut
