#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tokompiler/source_unit.hpp"

namespace tokompiler {

enum class TokenKind {
    Identifier,
    Number,
    String,     // string and character literals
    Punct,
    Comment,
    Whitespace,
    Error,      // unterminated literal/comment, stray byte
};

struct Token {
    TokenKind kind;
    std::size_t begin;
    std::size_t end;            // one past the last byte
    bool in_directive = false;  // inside a C/C++ preprocessor line
    bool stmt_start = false;    // first non-trivia token of a statement
};

inline bool is_trivia(TokenKind k) {
    return k == TokenKind::Whitespace || k == TokenKind::Comment;
}

struct LexResult {
    std::vector<Token> tokens;  // spans partition [0, text.size())
    int error_count = 0;
};

LexResult lex(std::string_view text, Language lang);

bool is_keyword(std::string_view lexeme, Language lang);

inline std::string_view lexeme_of(std::string_view text, const Token& t) {
    return text.substr(t.begin, t.end - t.begin);
}

} // namespace tokompiler
