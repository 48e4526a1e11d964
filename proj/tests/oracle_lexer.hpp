// Independent reference lexer used only by tests. Produces the
// comment-stripped lexeme sequence of a source text. Written as a separate
// character loop on purpose: round-trip checks compare the toolkit's output
// against this, so it must not share code with src/lexer.cpp.
#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "tokompiler/source_unit.hpp"

namespace oracle {

inline bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<std::string> lex_c_like(std::string_view s) {
    static const char* ops3[] = {"<<=", ">>=", "->*", "...", "<=>"};
    static const char* ops2[] = {"::", "->", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
                                 "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
                                 "##", ".*"};
    std::vector<std::string> out;
    size_t i = 0;
    auto starts = [&](const char* op) { return s.substr(i, std::string_view(op).size()) == op; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
            i += 2;
            while (i + 1 < s.size() && !(s[i] == '*' && s[i + 1] == '/')) ++i;
            i = i + 2 <= s.size() ? i + 2 : s.size();
            continue;
        }
        if (c == '"' || c == '\'') {
            size_t b = i++;
            while (i < s.size() && s[i] != c && s[i] != '\n') {
                if (s[i] == '\\') ++i;
                ++i;
            }
            if (i < s.size() && s[i] == c) ++i;
            out.emplace_back(s.substr(b, i - b));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            size_t b = i;
            while (i < s.size()) {
                char d = s[i];
                if (d == '\'' && i + 1 < s.size() &&
                    std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                    i += 2;
                    continue;
                }
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '.') {
                    ++i;
                    if ((d == 'e' || d == 'E' || d == 'p' || d == 'P') && i < s.size() &&
                        (s[i] == '+' || s[i] == '-') && i + 1 < s.size() &&
                        std::isdigit(static_cast<unsigned char>(s[i + 1])))
                        ++i;
                    continue;
                }
                break;
            }
            out.emplace_back(s.substr(b, i - b));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t b = i;
            while (i < s.size() && word_char(s[i])) ++i;
            out.emplace_back(s.substr(b, i - b));
            continue;
        }
        bool matched = false;
        for (const char* op : ops3)
            if (starts(op)) {
                out.emplace_back(op);
                i += 3;
                matched = true;
                break;
            }
        if (matched) continue;
        for (const char* op : ops2)
            if (starts(op)) {
                out.emplace_back(op);
                i += 2;
                matched = true;
                break;
            }
        if (matched) continue;
        out.emplace_back(1, c);
        ++i;
    }
    return out;
}

inline std::vector<std::string> lex_fortran(std::string_view s) {
    static const char* ops2[] = {"::", "**", "==", "/=", "<=", ">=", "=>", "//", "(/", "/)"};
    std::vector<std::string> out;
    size_t i = 0;
    auto dot_op_len = [&](size_t at) -> size_t {
        if (at >= s.size() || s[at] != '.') return 0;
        size_t j = at + 1;
        while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
        if (j > at + 1 && j < s.size() && s[j] == '.') return j - at + 1;
        return 0;
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '!') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        if (c == '"' || c == '\'') {
            size_t b = i++;
            while (i < s.size() && s[i] != '\n') {
                if (s[i] == c) {
                    if (i + 1 < s.size() && s[i + 1] == c) {
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                ++i;
            }
            out.emplace_back(s.substr(b, i - b));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && dot_op_len(i) == 0 && i + 1 < s.size() &&
             std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            size_t b = i;
            while (i < s.size()) {
                char d = s[i];
                if (d == '.') {
                    if (dot_op_len(i) > 0) break;
                    ++i;
                    continue;
                }
                if (d == '_') {
                    ++i;
                    while (i < s.size() && word_char(s[i])) ++i;
                    break;
                }
                if (std::isalnum(static_cast<unsigned char>(d))) {
                    ++i;
                    if ((d == 'e' || d == 'E' || d == 'd' || d == 'D' || d == 'q' || d == 'Q') &&
                        i < s.size() && (s[i] == '+' || s[i] == '-') && i + 1 < s.size() &&
                        std::isdigit(static_cast<unsigned char>(s[i + 1])))
                        ++i;
                    continue;
                }
                break;
            }
            out.emplace_back(s.substr(b, i - b));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t b = i;
            while (i < s.size() && word_char(s[i])) ++i;
            out.emplace_back(s.substr(b, i - b));
            continue;
        }
        if (size_t n = dot_op_len(i); n > 0) {
            out.emplace_back(s.substr(i, n));
            i += n;
            continue;
        }
        bool matched = false;
        for (const char* op : ops2)
            if (s.substr(i, 2) == op) {
                out.emplace_back(op);
                i += 2;
                matched = true;
                break;
            }
        if (matched) continue;
        out.emplace_back(1, c);
        ++i;
    }
    return out;
}

inline std::vector<std::string> lexemes(const tokompiler::SourceUnit& unit) {
    return unit.language == tokompiler::Language::Fortran ? lex_fortran(unit.text)
                                                          : lex_c_like(unit.text);
}

} // namespace oracle
