#include "crashrepro/sutlang/testcase.hpp"

#include <sstream>

#include "lexer.hpp"

namespace crashrepro::sut {

Literal Literal::of_int(long long v) {
    Literal l;
    l.kind = Kind::Int;
    l.i = v;
    return l;
}

Literal Literal::of_bool(bool v) {
    Literal l;
    l.kind = Kind::Bool;
    l.b = v;
    return l;
}

Literal Literal::of_string(std::string v) {
    Literal l;
    l.kind = Kind::String;
    l.s = std::move(v);
    return l;
}

Literal Literal::null() {
    Literal l;
    l.kind = Kind::Object;
    l.is_null = true;
    return l;
}

Arg Arg::of_var(std::string name) {
    Arg a;
    a.is_var = true;
    a.var = std::move(name);
    return a;
}

Arg Arg::of_lit(Literal l) {
    Arg a;
    a.lit = std::move(l);
    return a;
}

TStmt TStmt::lit_assign(std::string var, Literal l) {
    TStmt s;
    s.tag = Tag::LitAssign;
    s.var = std::move(var);
    s.a_lhs = Arg::of_lit(std::move(l));
    return s;
}

TStmt TStmt::construct(std::string var, std::string cls, std::vector<Arg> args) {
    TStmt s;
    s.tag = Tag::Construct;
    s.var = std::move(var);
    s.cls = std::move(cls);
    s.args = std::move(args);
    return s;
}

TStmt TStmt::call(std::string receiver, std::string method, std::vector<Arg> args,
                  std::string result_var) {
    TStmt s;
    s.tag = Tag::Call;
    s.receiver = std::move(receiver);
    s.method = std::move(method);
    s.args = std::move(args);
    s.var = std::move(result_var);
    return s;
}

namespace {

Arg parse_arg(Lexer& lex) {
    const Token& t = lex.peek();
    switch (t.type) {
        case Token::Type::Int:
            return Arg::of_lit(Literal::of_int(lex.next().int_val));
        case Token::Type::String:
            return Arg::of_lit(Literal::of_string(lex.next().text));
        case Token::Type::Ident:
            break;
        default:
            lex.fail("expected argument");
    }
    if (t.text == "true" || t.text == "false")
        return Arg::of_lit(Literal::of_bool(lex.next().text == "true"));
    if (t.text == "null") {
        lex.next();
        return Arg::of_lit(Literal::null());
    }
    return Arg::of_var(lex.next().text);
}

Arg parse_arg_signed(Lexer& lex) {
    if (lex.at_punct("-")) {
        lex.next();
        if (lex.peek().type != Token::Type::Int) lex.fail("expected integer after '-'");
        return Arg::of_lit(Literal::of_int(-lex.next().int_val));
    }
    return parse_arg(lex);
}

std::vector<Arg> parse_call_args(Lexer& lex) {
    lex.expect_punct("(");
    std::vector<Arg> args;
    while (!lex.at_punct(")")) {
        if (!args.empty()) lex.expect_punct(",");
        args.push_back(parse_arg_signed(lex));
    }
    lex.expect_punct(")");
    return args;
}

std::string escape_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string format_arg(const Arg& a) {
    if (a.is_var) return a.var;
    const Literal& l = a.lit;
    if (l.is_null) return "null";
    switch (l.kind) {
        case Kind::Int: return std::to_string(l.i);
        case Kind::Bool: return l.b ? "true" : "false";
        case Kind::String: return escape_string(l.s);
        case Kind::Object: return "null";
    }
    return "null";
}

const char* cmp_text(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
        case CmpOp::None: break;
    }
    return "";
}

}  // namespace

TestCase parse_test(const std::string& text, const std::string& name) {
    TestCase test;
    test.name = name;
    Lexer lex(text, name);
    int last_line = 0;
    while (lex.peek().type != Token::Type::End) {
        TStmt s;
        s.line = lex.peek().line;
        if (s.line == last_line) lex.fail("multiple statements on one line");
        last_line = s.line;
        if (lex.at_ident("assert")) {
            lex.next();
            s.tag = TStmt::Tag::Assert;
            s.a_lhs = parse_arg_signed(lex);
            if (lex.at_punct("==")) s.cmp = CmpOp::Eq;
            else if (lex.at_punct("!=")) s.cmp = CmpOp::Ne;
            else if (lex.at_punct("<")) s.cmp = CmpOp::Lt;
            else if (lex.at_punct("<=")) s.cmp = CmpOp::Le;
            else if (lex.at_punct(">")) s.cmp = CmpOp::Gt;
            else if (lex.at_punct(">=")) s.cmp = CmpOp::Ge;
            if (s.cmp != CmpOp::None) {
                lex.next();
                s.a_rhs = parse_arg_signed(lex);
            }
            lex.expect_punct(";");
            test.stmts.push_back(std::move(s));
            continue;
        }
        Token first = lex.expect_ident();
        if (lex.at_punct(".")) {
            lex.next();
            s.tag = TStmt::Tag::Call;
            s.receiver = first.text;
            s.method = lex.expect_ident().text;
            s.args = parse_call_args(lex);
        } else {
            lex.expect_punct("=");
            if (lex.at_ident("new")) {
                lex.next();
                s.tag = TStmt::Tag::Construct;
                s.var = first.text;
                s.cls = lex.expect_ident().text;
                s.args = parse_call_args(lex);
            } else if (lex.peek().type == Token::Type::Ident &&
                       lex.peek_at(1).type == Token::Type::Punct && lex.peek_at(1).text == "." &&
                       lex.peek_at(2).type == Token::Type::Ident) {
                s.tag = TStmt::Tag::Call;
                s.var = first.text;
                s.receiver = lex.expect_ident().text;
                lex.expect_punct(".");
                s.method = lex.expect_ident().text;
                s.args = parse_call_args(lex);
            } else {
                s.tag = TStmt::Tag::LitAssign;
                s.var = first.text;
                s.a_lhs = parse_arg_signed(lex);
            }
        }
        lex.expect_punct(";");
        test.stmts.push_back(std::move(s));
    }
    return test;
}

std::string format_test(const TestCase& test) {
    std::ostringstream out;
    for (const auto& s : test.stmts) {
        switch (s.tag) {
            case TStmt::Tag::LitAssign:
                out << s.var << " = " << format_arg(s.a_lhs) << ";\n";
                break;
            case TStmt::Tag::Construct: {
                out << s.var << " = new " << s.cls << "(";
                for (size_t i = 0; i < s.args.size(); ++i)
                    out << (i ? ", " : "") << format_arg(s.args[i]);
                out << ");\n";
                break;
            }
            case TStmt::Tag::Call: {
                if (!s.var.empty()) out << s.var << " = ";
                out << s.receiver << "." << s.method << "(";
                for (size_t i = 0; i < s.args.size(); ++i)
                    out << (i ? ", " : "") << format_arg(s.args[i]);
                out << ");\n";
                break;
            }
            case TStmt::Tag::Assert:
                out << "assert " << format_arg(s.a_lhs);
                if (s.cmp != CmpOp::None) out << " " << cmp_text(s.cmp) << " " << format_arg(s.a_rhs);
                out << ";\n";
                break;
        }
    }
    return out.str();
}

}  // namespace crashrepro::sut
