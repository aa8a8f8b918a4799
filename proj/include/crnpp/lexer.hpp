#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "crnpp/diagnostics.hpp"

namespace crnpp {

enum class Tok {
    Ident,
    Number,
    Equals,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Semicolon,
    End,
    Bad,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    SourceLoc loc;
};

// Hand-rolled scanner for the bracketed concrete syntax. Whitespace and
// newlines are insignificant; `#` starts a line comment.
class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run(DiagnosticList& diags) {
        std::vector<Token> out;
        while (true) {
            Token t = next(diags);
            out.push_back(t);
            if (t.kind == Tok::End) break;
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (c == '#') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    Token next(DiagnosticList& diags) {
        skip_trivia();
        SourceLoc loc{line_, col_};
        if (pos_ >= src_.size()) return {Tok::End, "", 0.0, loc};

        char c = advance();
        switch (c) {
            case '=': return {Tok::Equals, "=", 0.0, loc};
            case '{': return {Tok::LBrace, "{", 0.0, loc};
            case '}': return {Tok::RBrace, "}", 0.0, loc};
            case '[': return {Tok::LBracket, "[", 0.0, loc};
            case ']': return {Tok::RBracket, "]", 0.0, loc};
            case ',': return {Tok::Comma, ",", 0.0, loc};
            case '+': return {Tok::Plus, "+", 0.0, loc};
            case ';': return {Tok::Semicolon, ";", 0.0, loc};
            default: break;
        }

        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id(1, c);
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                id += advance();
            return {Tok::Ident, std::move(id), 0.0, loc};
        }

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
            std::string num(1, c);
            bool seen_exp = false;
            while (pos_ < src_.size()) {
                char p = peek();
                if (std::isdigit(static_cast<unsigned char>(p)) || p == '.') {
                    num += advance();
                } else if ((p == 'e' || p == 'E') && !seen_exp) {
                    seen_exp = true;
                    num += advance();
                    if (peek() == '+' || peek() == '-') num += advance();
                } else {
                    break;
                }
            }
            try {
                double v = std::stod(num);
                return {Tok::Number, std::move(num), v, loc};
            } catch (...) {
                diags.error(loc, "syntax", "malformed number '" + num + "'");
                return {Tok::Bad, std::move(num), 0.0, loc};
            }
        }

        diags.error(loc, "syntax", std::string("unexpected character '") + c + "'");
        return {Tok::Bad, std::string(1, c), 0.0, loc};
    }
};

}  // namespace crnpp
