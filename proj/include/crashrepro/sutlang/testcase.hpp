#pragma once

#include <string>
#include <vector>

#include "crashrepro/sutlang/ast.hpp"

namespace crashrepro::sut {

/// A concrete literal value appearing in a test statement.
struct Literal {
    Kind kind = Kind::Int;
    bool is_null = false;  // the `null` literal (object kind)
    long long i = 0;
    bool b = false;
    std::string s;

    bool operator==(const Literal&) const = default;

    static Literal of_int(long long v);
    static Literal of_bool(bool v);
    static Literal of_string(std::string v);
    static Literal null();
};

/// Argument of a test-level call: either a literal or a reference to a
/// variable declared earlier in the test.
struct Arg {
    bool is_var = false;
    std::string var;
    Literal lit;

    bool operator==(const Arg&) const = default;

    static Arg of_var(std::string name);
    static Arg of_lit(Literal l);
};

enum class CmpOp { None, Eq, Ne, Lt, Le, Gt, Ge };

/// One straight-line test statement. Tests have no control flow: they
/// declare variables, construct objects, call methods, and assert.
struct TStmt {
    enum class Tag { LitAssign, Construct, Call, Assert };

    Tag tag = Tag::LitAssign;
    int line = 0;
    std::string var;       // result variable (Call: may be empty)
    std::string cls;       // Construct: class name
    std::string receiver;  // Call
    std::string method;    // Call
    std::vector<Arg> args;
    // Assert payload: lhs (cmp rhs)?  cmp == None means a bare boolean check.
    CmpOp cmp = CmpOp::None;
    Arg a_lhs;
    Arg a_rhs;

    bool operator==(const TStmt&) const = default;

    static TStmt lit_assign(std::string var, Literal l);
    static TStmt construct(std::string var, std::string cls, std::vector<Arg> args = {});
    static TStmt call(std::string receiver, std::string method, std::vector<Arg> args = {},
                      std::string result_var = "");
};

struct TestCase {
    std::string name;
    std::vector<TStmt> stmts;

    bool operator==(const TestCase&) const = default;
};

TestCase parse_test(const std::string& text, const std::string& name);
std::string format_test(const TestCase& test);

}  // namespace crashrepro::sut
