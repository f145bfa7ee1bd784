#pragma once

#include <string>
#include <vector>

#include "crashrepro/sutlang/ast.hpp"

namespace crashrepro::sut {

struct Token {
    enum class Type {
        Ident,
        Int,
        String,
        Punct,  // one of ( ) { } ; , . = : == != <= >= < > + - * / ! && ||
        End,
    };
    Type type = Type::End;
    std::string text;
    long long int_val = 0;
    int line = 1;
};

class Lexer {
public:
    Lexer(const std::string& text, std::string file);

    const Token& peek() const { return tokens_[pos_]; }
    const Token& peek2() const;
    const Token& peek_at(size_t ahead) const;
    Token next();

    bool at_punct(const std::string& p) const;
    bool at_ident(const std::string& name) const;
    Token expect_punct(const std::string& p);
    Token expect_ident();

    [[noreturn]] void fail(const std::string& message) const;
    [[noreturn]] void fail_at(const std::string& message, int line) const;

    const std::string& file() const { return file_; }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    std::string file_;
};

}  // namespace crashrepro::sut
