#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crashrepro::sut {

/// Declared kind of a field or parameter. Object kinds carry the class name.
enum class Kind { Int, Bool, String, Object };

struct TypeRef {
    Kind kind = Kind::Int;
    std::string class_name;  // set iff kind == Kind::Object

    bool operator==(const TypeRef&) const = default;
};

enum class BinOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Neg, Not };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    enum class Tag { IntLit, BoolLit, StrLit, Null, Var, FieldRead, Unary, Binary };

    Tag tag = Tag::Null;
    long long int_val = 0;
    bool bool_val = false;
    std::string name;  // Var / FieldRead identifier, StrLit value
    BinOp bin_op = BinOp::Add;
    UnOp un_op = UnOp::Neg;
    ExprPtr lhs;
    ExprPtr rhs;
    int line = 0;

    ExprPtr clone() const;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    enum class Tag { Assign, FieldAssign, New, Call, If, While, Return, Throw };

    Tag tag = Tag::Assign;
    int line = 0;
    std::string var;       // Assign/New/Call result variable (Call: may be empty);
                           // FieldAssign: field name
    bool into_field = false;  // New/Call: result stored in field `var` of `this`
    std::string callee;    // New: class name; Call: method name; Throw: exception type
    std::string receiver;  // Call receiver variable ("this" allowed)
    std::string message;   // Throw message
    ExprPtr expr;          // Assign/FieldAssign RHS, Return value, If/While condition
    std::vector<ExprPtr> args;
    std::vector<StmtPtr> body;       // If then-branch / While body
    std::vector<StmtPtr> else_body;  // If else-branch

    StmtPtr clone() const;
};

struct MethodDef {
    std::string name;  // "<init>" for constructors
    std::vector<std::pair<std::string, TypeRef>> params;
    std::vector<StmtPtr> body;
    int line = 0;
    bool is_constructor = false;

    size_t arity() const { return params.size(); }
    /// Action label used in call sequences: "<init>/2" for constructors,
    /// the plain method name otherwise.
    std::string action_name() const;
};

struct ClassDef {
    std::string name;
    std::string file;
    int line = 0;
    std::map<std::string, TypeRef> fields;
    std::vector<MethodDef> constructors;
    std::vector<MethodDef> methods;

    const MethodDef* find_method(const std::string& method, size_t arity) const;
    std::vector<const MethodDef*> methods_named(const std::string& method) const;
    const MethodDef* find_constructor(size_t arity) const;
};

struct Program {
    std::map<std::string, ClassDef> classes;

    const ClassDef* find_class(const std::string& name) const;
};

/// Parse failure, harness-config failure, or any other user-input error.
struct ParseError : std::runtime_error {
    std::string file;
    int line;
    ParseError(std::string message, std::string file_name, int line_no);
};

/// parse_program: each input is (file-name, source text).
Program parse_program(const std::vector<std::pair<std::string, std::string>>& sources);

std::string action_label(const std::string& method, size_t arity, bool is_constructor);

}  // namespace crashrepro::sut
