#include <algorithm>
#include <set>

#include "crashrepro/sutlang/ast.hpp"
#include "lexer.hpp"

namespace crashrepro::sut {

ParseError::ParseError(std::string message, std::string file_name, int line_no)
    : std::runtime_error(file_name.empty()
                             ? message
                             : file_name + ":" + std::to_string(line_no) + ": " + message),
      file(std::move(file_name)),
      line(line_no) {}

std::string action_label(const std::string& method, size_t arity, bool is_constructor) {
    if (is_constructor) return "<init>/" + std::to_string(arity);
    return method;
}

std::string MethodDef::action_name() const {
    return action_label(name, arity(), is_constructor);
}

ExprPtr Expr::clone() const {
    auto e = std::make_unique<Expr>();
    e->tag = tag;
    e->int_val = int_val;
    e->bool_val = bool_val;
    e->name = name;
    e->bin_op = bin_op;
    e->un_op = un_op;
    e->line = line;
    if (lhs) e->lhs = lhs->clone();
    if (rhs) e->rhs = rhs->clone();
    return e;
}

StmtPtr Stmt::clone() const {
    auto s = std::make_unique<Stmt>();
    s->tag = tag;
    s->line = line;
    s->var = var;
    s->into_field = into_field;
    s->callee = callee;
    s->receiver = receiver;
    s->message = message;
    if (expr) s->expr = expr->clone();
    for (const auto& a : args) s->args.push_back(a->clone());
    for (const auto& b : body) s->body.push_back(b->clone());
    for (const auto& b : else_body) s->else_body.push_back(b->clone());
    return s;
}

const MethodDef* ClassDef::find_method(const std::string& method, size_t arity) const {
    for (const auto& m : methods)
        if (m.name == method && m.arity() == arity) return &m;
    return nullptr;
}

std::vector<const MethodDef*> ClassDef::methods_named(const std::string& method) const {
    std::vector<const MethodDef*> out;
    for (const auto& m : methods)
        if (m.name == method) out.push_back(&m);
    return out;
}

const MethodDef* ClassDef::find_constructor(size_t arity) const {
    for (const auto& c : constructors)
        if (c.arity() == arity) return &c;
    return nullptr;
}

const ClassDef* Program::find_class(const std::string& name) const {
    auto it = classes.find(name);
    return it == classes.end() ? nullptr : &it->second;
}

namespace {

class Parser {
public:
    Parser(Lexer& lex) : lex_(lex) {}

    ClassDef parse_class() {
        ClassDef cls;
        if (!lex_.at_ident("class")) lex_.fail("expected 'class'");
        cls.line = lex_.next().line;
        cls.file = lex_.file();
        cls.name = lex_.expect_ident().text;
        lex_.expect_punct("{");
        while (!lex_.at_punct("}")) {
            if (lex_.at_ident("field")) {
                lex_.next();
                Token name = lex_.expect_ident();
                lex_.expect_punct(":");
                TypeRef type = parse_type();
                lex_.expect_punct(";");
                if (cls.fields.count(name.text))
                    lex_.fail_at("duplicate field '" + name.text + "'", name.line);
                cls.fields.emplace(name.text, type);
            } else if (lex_.at_ident("constructor")) {
                int line = lex_.next().line;
                MethodDef ctor = parse_callable("<init>", line, /*is_constructor=*/true);
                if (cls.find_constructor(ctor.arity()))
                    lex_.fail_at("duplicate constructor arity " + std::to_string(ctor.arity()),
                                 line);
                cls.constructors.push_back(std::move(ctor));
            } else if (lex_.at_ident("method")) {
                lex_.next();
                Token name = lex_.expect_ident();
                MethodDef m = parse_callable(name.text, name.line, /*is_constructor=*/false);
                if (cls.find_method(m.name, m.arity()))
                    lex_.fail_at("duplicate method " + m.name + "/" + std::to_string(m.arity()),
                                 name.line);
                cls.methods.push_back(std::move(m));
            } else {
                lex_.fail("expected 'field', 'constructor', or 'method'");
            }
        }
        lex_.expect_punct("}");
        if (cls.constructors.empty()) {
            // Implicit zero-argument constructor.
            MethodDef ctor;
            ctor.name = "<init>";
            ctor.is_constructor = true;
            ctor.line = cls.line;
            cls.constructors.push_back(std::move(ctor));
        }
        return cls;
    }

    bool at_end() const { return lex_.peek().type == Token::Type::End; }

private:
    TypeRef parse_type() {
        Token t = lex_.expect_ident();
        TypeRef type;
        if (t.text == "int") {
            type.kind = Kind::Int;
        } else if (t.text == "bool") {
            type.kind = Kind::Bool;
        } else if (t.text == "string") {
            type.kind = Kind::String;
        } else {
            type.kind = Kind::Object;
            type.class_name = t.text;
        }
        return type;
    }

    MethodDef parse_callable(const std::string& name, int line, bool is_constructor) {
        MethodDef m;
        m.name = name;
        m.line = line;
        m.is_constructor = is_constructor;
        lex_.expect_punct("(");
        while (!lex_.at_punct(")")) {
            if (!m.params.empty()) lex_.expect_punct(",");
            Token pname = lex_.expect_ident();
            lex_.expect_punct(":");
            m.params.emplace_back(pname.text, parse_type());
        }
        lex_.expect_punct(")");
        m.body = parse_block();
        return m;
    }

    std::vector<StmtPtr> parse_block() {
        lex_.expect_punct("{");
        std::vector<StmtPtr> stmts;
        while (!lex_.at_punct("}")) stmts.push_back(parse_stmt());
        lex_.expect_punct("}");
        return stmts;
    }

    StmtPtr parse_stmt() {
        auto s = std::make_unique<Stmt>();
        const Token& t = lex_.peek();
        s->line = t.line;
        if (t.type != Token::Type::Ident) lex_.fail("expected statement");
        if (t.text == "if") {
            lex_.next();
            s->tag = Stmt::Tag::If;
            lex_.expect_punct("(");
            s->expr = parse_expr();
            lex_.expect_punct(")");
            s->body = parse_block();
            if (lex_.at_ident("else")) {
                lex_.next();
                s->else_body = parse_block();
            }
            return s;
        }
        if (t.text == "while") {
            lex_.next();
            s->tag = Stmt::Tag::While;
            lex_.expect_punct("(");
            s->expr = parse_expr();
            lex_.expect_punct(")");
            s->body = parse_block();
            return s;
        }
        if (t.text == "return") {
            lex_.next();
            s->tag = Stmt::Tag::Return;
            if (!lex_.at_punct(";")) s->expr = parse_expr();
            lex_.expect_punct(";");
            return s;
        }
        if (t.text == "throw") {
            lex_.next();
            s->tag = Stmt::Tag::Throw;
            s->callee = lex_.expect_ident().text;
            lex_.expect_punct("(");
            if (lex_.peek().type == Token::Type::String) s->message = lex_.next().text;
            lex_.expect_punct(")");
            lex_.expect_punct(";");
            return s;
        }
        if (t.text == "this") {
            // this.f = expr;  or  this.m(args);  or  x = this.m(args); is
            // handled in the assignment branch below.
            lex_.next();
            lex_.expect_punct(".");
            Token member = lex_.expect_ident();
            if (lex_.at_punct("(")) {
                s->tag = Stmt::Tag::Call;
                s->receiver = "this";
                s->callee = member.text;
                s->args = parse_args();
            } else {
                lex_.expect_punct("=");
                if (lex_.at_ident("new")) {
                    lex_.next();
                    s->tag = Stmt::Tag::New;
                    s->var = member.text;
                    s->into_field = true;
                    s->callee = lex_.expect_ident().text;
                    s->args = parse_args();
                } else if (call_ahead()) {
                    s->tag = Stmt::Tag::Call;
                    s->var = member.text;
                    s->into_field = true;
                    s->receiver = lex_.expect_ident().text;
                    lex_.expect_punct(".");
                    s->callee = lex_.expect_ident().text;
                    s->args = parse_args();
                } else {
                    s->tag = Stmt::Tag::FieldAssign;
                    s->var = member.text;
                    s->expr = parse_expr();
                }
            }
            lex_.expect_punct(";");
            return s;
        }
        // NAME = ...  or  NAME.method(args);
        Token name = lex_.expect_ident();
        if (lex_.at_punct(".")) {
            lex_.next();
            s->tag = Stmt::Tag::Call;
            s->receiver = name.text;
            s->callee = lex_.expect_ident().text;
            s->args = parse_args();
            lex_.expect_punct(";");
            return s;
        }
        lex_.expect_punct("=");
        if (lex_.at_ident("new")) {
            lex_.next();
            s->tag = Stmt::Tag::New;
            s->var = name.text;
            s->callee = lex_.expect_ident().text;
            s->args = parse_args();
        } else if (call_ahead()) {
            // x = recv.m(args);   (receiver may be `this`)
            Token recv = lex_.expect_ident();
            lex_.expect_punct(".");
            s->tag = Stmt::Tag::Call;
            s->var = name.text;
            s->receiver = recv.text;
            s->callee = lex_.expect_ident().text;
            s->args = parse_args();
        } else {
            s->tag = Stmt::Tag::Assign;
            s->var = name.text;
            s->expr = parse_expr();
        }
        lex_.expect_punct(";");
        return s;
    }

    // Distinguishes `x = recv.m(...)` from a plain expression such as
    // `x = this.f` by looking for ident '.' ident '('.
    bool call_ahead() const {
        return lex_.peek().type == Token::Type::Ident &&
               lex_.peek_at(1).type == Token::Type::Punct && lex_.peek_at(1).text == "." &&
               lex_.peek_at(2).type == Token::Type::Ident &&
               lex_.peek_at(3).type == Token::Type::Punct && lex_.peek_at(3).text == "(";
    }

    std::vector<ExprPtr> parse_args() {
        lex_.expect_punct("(");
        std::vector<ExprPtr> args;
        while (!lex_.at_punct(")")) {
            if (!args.empty()) lex_.expect_punct(",");
            args.push_back(parse_expr());
        }
        lex_.expect_punct(")");
        return args;
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (lex_.at_punct("||")) {
            int line = lex_.next().line;
            e = make_binary(BinOp::Or, std::move(e), parse_and(), line);
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_cmp();
        while (lex_.at_punct("&&")) {
            int line = lex_.next().line;
            e = make_binary(BinOp::And, std::move(e), parse_cmp(), line);
        }
        return e;
    }

    ExprPtr parse_cmp() {
        ExprPtr e = parse_add();
        while (true) {
            BinOp op;
            if (lex_.at_punct("==")) op = BinOp::Eq;
            else if (lex_.at_punct("!=")) op = BinOp::Ne;
            else if (lex_.at_punct("<")) op = BinOp::Lt;
            else if (lex_.at_punct("<=")) op = BinOp::Le;
            else if (lex_.at_punct(">")) op = BinOp::Gt;
            else if (lex_.at_punct(">=")) op = BinOp::Ge;
            else break;
            int line = lex_.next().line;
            e = make_binary(op, std::move(e), parse_add(), line);
        }
        return e;
    }

    ExprPtr parse_add() {
        ExprPtr e = parse_mul();
        while (lex_.at_punct("+") || lex_.at_punct("-")) {
            BinOp op = lex_.at_punct("+") ? BinOp::Add : BinOp::Sub;
            int line = lex_.next().line;
            e = make_binary(op, std::move(e), parse_mul(), line);
        }
        return e;
    }

    ExprPtr parse_mul() {
        ExprPtr e = parse_unary();
        while (lex_.at_punct("*") || lex_.at_punct("/")) {
            BinOp op = lex_.at_punct("*") ? BinOp::Mul : BinOp::Div;
            int line = lex_.next().line;
            e = make_binary(op, std::move(e), parse_unary(), line);
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (lex_.at_punct("-")) {
            int line = lex_.next().line;
            auto e = std::make_unique<Expr>();
            e->tag = Expr::Tag::Unary;
            e->un_op = UnOp::Neg;
            e->lhs = parse_unary();
            e->line = line;
            return e;
        }
        if (lex_.at_punct("!")) {
            int line = lex_.next().line;
            auto e = std::make_unique<Expr>();
            e->tag = Expr::Tag::Unary;
            e->un_op = UnOp::Not;
            e->lhs = parse_unary();
            e->line = line;
            return e;
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        auto e = std::make_unique<Expr>();
        const Token& t = lex_.peek();
        e->line = t.line;
        if (lex_.at_punct("(")) {
            lex_.next();
            e = parse_expr();
            lex_.expect_punct(")");
            return e;
        }
        switch (t.type) {
            case Token::Type::Int:
                e->tag = Expr::Tag::IntLit;
                e->int_val = lex_.next().int_val;
                return e;
            case Token::Type::String:
                e->tag = Expr::Tag::StrLit;
                e->name = lex_.next().text;
                return e;
            case Token::Type::Ident:
                break;
            default:
                lex_.fail("expected expression");
        }
        if (t.text == "true" || t.text == "false") {
            e->tag = Expr::Tag::BoolLit;
            e->bool_val = t.text == "true";
            lex_.next();
            return e;
        }
        if (t.text == "null") {
            e->tag = Expr::Tag::Null;
            lex_.next();
            return e;
        }
        if (t.text == "this") {
            lex_.next();
            lex_.expect_punct(".");
            e->tag = Expr::Tag::FieldRead;
            e->name = lex_.expect_ident().text;
            return e;
        }
        e->tag = Expr::Tag::Var;
        e->name = lex_.next().text;
        return e;
    }

    static ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, int line) {
        auto e = std::make_unique<Expr>();
        e->tag = Expr::Tag::Binary;
        e->bin_op = op;
        e->lhs = std::move(lhs);
        e->rhs = std::move(rhs);
        e->line = line;
        return e;
    }

    Lexer& lex_;
};

void collect_expr_vars(const Expr& e, std::set<std::string>& vars,
                       std::set<std::string>& fields) {
    switch (e.tag) {
        case Expr::Tag::Var: vars.insert(e.name); break;
        case Expr::Tag::FieldRead: fields.insert(e.name); break;
        default: break;
    }
    if (e.lhs) collect_expr_vars(*e.lhs, vars, fields);
    if (e.rhs) collect_expr_vars(*e.rhs, vars, fields);
}

void scan_body(const std::vector<StmtPtr>& body, std::set<std::string>& assigned,
               std::set<std::string>& used_vars, std::set<std::string>& used_fields,
               std::set<std::string>& assigned_fields) {
    for (const auto& s : body) {
        if (s->expr) collect_expr_vars(*s->expr, used_vars, used_fields);
        for (const auto& a : s->args) collect_expr_vars(*a, used_vars, used_fields);
        switch (s->tag) {
            case Stmt::Tag::Assign:
                assigned.insert(s->var);
                break;
            case Stmt::Tag::New:
                (s->into_field ? assigned_fields : assigned).insert(s->var);
                break;
            case Stmt::Tag::Call:
                if (!s->var.empty()) (s->into_field ? assigned_fields : assigned).insert(s->var);
                if (s->receiver != "this") used_vars.insert(s->receiver);
                break;
            case Stmt::Tag::FieldAssign:
                assigned_fields.insert(s->var);
                break;
            default:
                break;
        }
        scan_body(s->body, assigned, used_vars, used_fields, assigned_fields);
        scan_body(s->else_body, assigned, used_vars, used_fields, assigned_fields);
    }
}

void check_line_uniqueness(const std::vector<StmtPtr>& body, const std::string& file,
                           std::set<int>& lines) {
    for (const auto& s : body) {
        if (s->line < 1) throw ParseError("statement line below 1", file, s->line);
        if (!lines.insert(s->line).second)
            throw ParseError("multiple statements on one line", file, s->line);
        check_line_uniqueness(s->body, file, lines);
        check_line_uniqueness(s->else_body, file, lines);
    }
}

void validate_callable(const ClassDef& cls, const MethodDef& m) {
    std::set<std::string> assigned, used_vars, used_fields, assigned_fields;
    for (const auto& [pname, _] : m.params) assigned.insert(pname);
    scan_body(m.body, assigned, used_vars, used_fields, assigned_fields);
    for (const auto& v : used_vars) {
        if (!assigned.count(v))
            throw ParseError("undeclared identifier '" + v + "' in " + cls.name + "." + m.name,
                             cls.file, m.line);
    }
    for (const auto& f : used_fields) {
        if (!cls.fields.count(f))
            throw ParseError("undeclared field '" + f + "' in " + cls.name + "." + m.name,
                             cls.file, m.line);
    }
    for (const auto& f : assigned_fields) {
        if (!cls.fields.count(f))
            throw ParseError("undeclared field '" + f + "' in " + cls.name + "." + m.name,
                             cls.file, m.line);
    }
}

}  // namespace

Program parse_program(const std::vector<std::pair<std::string, std::string>>& sources) {
    if (sources.empty()) throw ParseError("no classes", "", 0);
    Program program;
    for (const auto& [file, text] : sources) {
        Lexer lex(text, file);
        Parser parser(lex);
        std::set<int> file_lines;
        bool any = false;
        while (!parser.at_end()) {
            ClassDef cls = parser.parse_class();
            any = true;
            for (const auto& ctor : cls.constructors)
                check_line_uniqueness(ctor.body, file, file_lines);
            for (const auto& m : cls.methods) check_line_uniqueness(m.body, file, file_lines);
            if (program.classes.count(cls.name))
                throw ParseError("duplicate class '" + cls.name + "'", file, cls.line);
            program.classes.emplace(cls.name, std::move(cls));
        }
        if (!any) throw ParseError("no classes", file, 1);
    }
    for (const auto& [_, cls] : program.classes) {
        for (const auto& ctor : cls.constructors) validate_callable(cls, ctor);
        for (const auto& m : cls.methods) validate_callable(cls, m);
    }
    return program;
}

}  // namespace crashrepro::sut
