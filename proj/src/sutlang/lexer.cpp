#include "lexer.hpp"

namespace crashrepro::sut {

namespace {

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

}  // namespace

Lexer::Lexer(const std::string& text, std::string file) : file_(std::move(file)) {
    size_t i = 0;
    int line = 1;
    const size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && text[i + 1] == '/') {
            while (i < n && text[i] != '\n') ++i;
            continue;
        }
        Token tok;
        tok.line = line;
        if (is_ident_start(c)) {
            size_t start = i;
            while (i < n && is_ident_char(text[i])) ++i;
            tok.type = Token::Type::Ident;
            tok.text = text.substr(start, i - start);
        } else if (c >= '0' && c <= '9') {
            size_t start = i;
            while (i < n && text[i] >= '0' && text[i] <= '9') ++i;
            tok.type = Token::Type::Int;
            tok.text = text.substr(start, i - start);
            try {
                tok.int_val = std::stoll(tok.text);
            } catch (const std::out_of_range&) {
                throw ParseError("integer literal out of range: " + tok.text, file_, line);
            }
        } else if (c == '"') {
            ++i;
            std::string value;
            while (i < n && text[i] != '"') {
                if (text[i] == '\n') throw ParseError("unterminated string literal", file_, line);
                if (text[i] == '\\' && i + 1 < n) {
                    char e = text[i + 1];
                    switch (e) {
                        case 'n': value += '\n'; break;
                        case 't': value += '\t'; break;
                        case '\\': value += '\\'; break;
                        case '"': value += '"'; break;
                        default:
                            throw ParseError(std::string("unknown escape \\") + e, file_, line);
                    }
                    i += 2;
                } else {
                    value += text[i++];
                }
            }
            if (i >= n) throw ParseError("unterminated string literal", file_, line);
            ++i;  // closing quote
            tok.type = Token::Type::String;
            tok.text = std::move(value);
        } else {
            static const char* two_char[] = {"==", "!=", "<=", ">=", "&&", "||"};
            tok.type = Token::Type::Punct;
            bool matched = false;
            if (i + 1 < n) {
                std::string pair = text.substr(i, 2);
                for (const char* p : two_char) {
                    if (pair == p) {
                        tok.text = pair;
                        i += 2;
                        matched = true;
                        break;
                    }
                }
            }
            if (!matched) {
                static const std::string singles = "(){};,.=:<>+-*/!";
                if (singles.find(c) == std::string::npos)
                    throw ParseError(std::string("unexpected character '") + c + "'", file_, line);
                tok.text = std::string(1, c);
                ++i;
            }
        }
        tokens_.push_back(std::move(tok));
    }
    Token end;
    end.type = Token::Type::End;
    end.line = line;
    tokens_.push_back(end);
}

const Token& Lexer::peek2() const { return peek_at(1); }

const Token& Lexer::peek_at(size_t ahead) const {
    size_t j = pos_ + ahead < tokens_.size() ? pos_ + ahead : tokens_.size() - 1;
    return tokens_[j];
}

Token Lexer::next() {
    Token t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
}

bool Lexer::at_punct(const std::string& p) const {
    return peek().type == Token::Type::Punct && peek().text == p;
}

bool Lexer::at_ident(const std::string& name) const {
    return peek().type == Token::Type::Ident && peek().text == name;
}

Token Lexer::expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'");
    return next();
}

Token Lexer::expect_ident() {
    if (peek().type != Token::Type::Ident) fail("expected identifier");
    return next();
}

void Lexer::fail(const std::string& message) const { fail_at(message, peek().line); }

void Lexer::fail_at(const std::string& message, int line) const {
    throw ParseError(message, file_, line);
}

}  // namespace crashrepro::sut
