#include "tokompiler/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace tokompiler {

std::string to_string(Language lang) {
    switch (lang) {
        case Language::C: return "c";
        case Language::Cpp: return "cpp";
        case Language::Fortran: return "fortran";
    }
    return "c";
}

Language language_from_string(const std::string& name) {
    std::string low;
    for (char c : name) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (low == "c") return Language::C;
    if (low == "cpp" || low == "c++" || low == "cxx") return Language::Cpp;
    if (low == "fortran" || low == "f90" || low == "f") return Language::Fortran;
    throw std::runtime_error("unknown language: " + name);
}

namespace {

const std::unordered_set<std::string>& c_keywords() {
    static const std::unordered_set<std::string> kw = {
        "auto", "break", "case", "char", "const", "continue", "default", "do", "double",
        "else", "enum", "extern", "float", "for", "goto", "if", "inline", "int", "long",
        "register", "restrict", "return", "short", "signed", "sizeof", "static", "struct",
        "switch", "typedef", "union", "unsigned", "void", "volatile", "while",
        "_Bool", "_Complex", "_Imaginary", "bool", "true", "false",
        // preprocessor directive names, so `# define` style lines stay verbatim
        "include", "define", "ifdef", "ifndef", "endif", "undef", "pragma", "elif", "error",
    };
    return kw;
}

const std::unordered_set<std::string>& cpp_keywords() {
    static const std::unordered_set<std::string> kw = [] {
        std::unordered_set<std::string> s = c_keywords();
        for (const char* k :
             {"alignas", "alignof", "and", "and_eq", "asm", "bitand", "bitor", "catch",
              "char8_t", "char16_t", "char32_t", "class", "compl", "concept", "consteval",
              "constexpr", "constinit", "const_cast", "co_await", "co_return", "co_yield",
              "decltype", "delete", "dynamic_cast", "explicit", "export", "friend", "mutable",
              "namespace", "new", "noexcept", "not", "not_eq", "nullptr", "operator", "or",
              "or_eq", "private", "protected", "public", "reinterpret_cast", "requires",
              "static_assert", "static_cast", "template", "this", "thread_local", "throw",
              "try", "typeid", "typename", "using", "virtual", "wchar_t", "xor", "xor_eq"})
            s.insert(k);
        return s;
    }();
    return kw;
}

const std::unordered_set<std::string>& fortran_keywords() {
    static const std::unordered_set<std::string> kw = {
        "program", "module", "subroutine", "function", "end", "endif", "enddo",
        "endfunction", "endsubroutine", "endprogram", "endmodule", "endtype",
        "endinterface", "endselect", "endwhere", "endblock", "contains", "use", "only",
        "implicit", "none", "integer", "real", "double", "precision", "complex", "logical",
        "character", "type", "dimension", "parameter", "allocatable", "pointer", "target",
        "intent", "in", "out", "inout", "optional", "save", "external", "intrinsic",
        "public", "private", "interface", "procedure", "result", "recursive", "pure",
        "elemental", "if", "then", "else", "elseif", "elsewhere", "select", "case",
        "default", "where", "forall", "do", "while", "continue", "cycle", "exit", "goto",
        "stop", "return", "call", "print", "read", "write", "open", "close", "format",
        "allocate", "deallocate", "nullify", "common", "equivalence", "data", "block",
        "entry", "sequence", "namelist", "kind", "len",
    };
    return kw;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

const std::array<const char*, 27>& c_multi_ops() {
    static const std::array<const char*, 27> ops = {
        "<<=", ">>=", "->*", "...", "::", "->", "<<", ">>", "<=", ">=", "==", "!=",
        "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "##",
        ".*", "<=>",
    };
    return ops;
}

const std::array<const char*, 10>& fortran_multi_ops() {
    static const std::array<const char*, 10> ops = {
        "::", "**", "==", "/=", "<=", ">=", "=>", "//", "(/", "/)",
    };
    return ops;
}

struct Lexer {
    std::string_view text;
    Language lang;
    std::size_t pos = 0;
    bool in_directive = false;
    LexResult out;

    char peek(std::size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }

    void emit(TokenKind kind, std::size_t begin) {
        out.tokens.push_back({kind, begin, pos, in_directive, false});
        if (kind == TokenKind::Error) ++out.error_count;
    }

    bool only_ws_since_line_start() const {
        std::size_t i = pos;
        while (i > 0) {
            char c = text[i - 1];
            if (c == '\n') return true;
            if (c != ' ' && c != '\t' && c != '\r') return false;
            --i;
        }
        return true;
    }

    void whitespace() {
        const std::size_t begin = pos;
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            if (text[pos] == '\n') in_directive = false;  // fix_directive_flags refines this
            ++pos;
        }
        out.tokens.push_back({TokenKind::Whitespace, begin, pos, false, false});
    }

    void line_comment(std::size_t begin) {
        while (pos < text.size() && text[pos] != '\n') ++pos;
        emit(TokenKind::Comment, begin);
    }

    void block_comment(std::size_t begin) {
        pos += 2;
        while (pos + 1 < text.size() && !(text[pos] == '*' && text[pos + 1] == '/')) ++pos;
        if (pos + 1 < text.size()) {
            pos += 2;
            emit(TokenKind::Comment, begin);
        } else {
            pos = text.size();
            emit(TokenKind::Error, begin);  // unterminated comment
        }
    }

    void c_string(char quote) {
        const std::size_t begin = pos;
        ++pos;
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '\\' && pos + 1 < text.size()) {
                pos += 2;
                continue;
            }
            if (c == quote) {
                ++pos;
                emit(TokenKind::String, begin);
                return;
            }
            if (c == '\n') break;
            ++pos;
        }
        emit(TokenKind::Error, begin);  // unterminated literal
    }

    void fortran_string(char quote) {
        const std::size_t begin = pos;
        ++pos;
        while (pos < text.size()) {
            char c = text[pos];
            if (c == quote) {
                if (peek(1) == quote) {  // doubled quote escape
                    pos += 2;
                    continue;
                }
                ++pos;
                emit(TokenKind::String, begin);
                return;
            }
            if (c == '\n') break;
            ++pos;
        }
        emit(TokenKind::Error, begin);
    }

    void identifier() {
        const std::size_t begin = pos;
        while (pos < text.size() && ident_char(text[pos])) ++pos;
        emit(TokenKind::Identifier, begin);
    }

    // True when text[at..] spells a Fortran dot operator such as `.and.`.
    bool fortran_dot_op_at(std::size_t at) const {
        if (at >= text.size() || text[at] != '.') return false;
        std::size_t i = at + 1;
        while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
        return i > at + 1 && i < text.size() && text[i] == '.';
    }

    void number() {
        const std::size_t begin = pos;
        const bool fortran = lang == Language::Fortran;
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '\'' && !fortran && digit(peek(1))) {  // C++ digit separator
                pos += 2;
                continue;
            }
            if (c == '.') {
                if (fortran && fortran_dot_op_at(pos)) break;
                ++pos;
                continue;
            }
            if (!fortran && c == '_') break;
            if (fortran && c == '_') {  // kind suffix, e.g. 1.0_dp
                ++pos;
                while (pos < text.size() && ident_char(text[pos])) ++pos;
                break;
            }
            if (std::isalnum(static_cast<unsigned char>(c))) {
                ++pos;
                const bool exp = fortran ? (c == 'e' || c == 'E' || c == 'd' || c == 'D' ||
                                            c == 'q' || c == 'Q')
                                         : (c == 'e' || c == 'E' || c == 'p' || c == 'P');
                if (exp && (peek() == '+' || peek() == '-') && digit(peek(1))) ++pos;
                continue;
            }
            break;
        }
        emit(TokenKind::Number, begin);
    }

    template <typename Ops>
    void punct(const Ops& multi) {
        const std::size_t begin = pos;
        for (const char* op : multi) {
            const std::size_t n = std::char_traits<char>::length(op);
            if (text.substr(pos, n) == op) {
                pos += n;
                emit(TokenKind::Punct, begin);
                return;
            }
        }
        ++pos;
        emit(TokenKind::Punct, begin);
    }

    void run_c_family() {
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isspace(static_cast<unsigned char>(c))) {
                whitespace();
                continue;
            }
            if (c == '#' && !in_directive && only_ws_since_line_start()) {
                in_directive = true;
                const std::size_t begin = pos++;
                emit(TokenKind::Punct, begin);
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                line_comment(pos);
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                block_comment(pos);
                continue;
            }
            if (c == '"' || c == '\'') {
                c_string(c);
                continue;
            }
            if (ident_start(c)) {
                identifier();
                continue;
            }
            if (digit(c) || (c == '.' && digit(peek(1)))) {
                number();
                continue;
            }
            punct(c_multi_ops());
        }
    }

    void run_fortran() {
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isspace(static_cast<unsigned char>(c))) {
                whitespace();
                continue;
            }
            if (c == '!') {
                line_comment(pos);
                continue;
            }
            if (c == '#' && !in_directive && only_ws_since_line_start()) {
                in_directive = true;
                const std::size_t begin = pos++;
                emit(TokenKind::Punct, begin);
                continue;
            }
            if (c == '"' || c == '\'') {
                fortran_string(c);
                continue;
            }
            if (ident_start(c)) {
                identifier();
                continue;
            }
            if (digit(c) || (c == '.' && digit(peek(1)) && !fortran_dot_op_at(pos))) {
                number();
                continue;
            }
            if (fortran_dot_op_at(pos)) {
                const std::size_t begin = pos;
                ++pos;
                while (pos < text.size() && text[pos] != '.') ++pos;
                ++pos;
                emit(TokenKind::Punct, begin);
                continue;
            }
            punct(fortran_multi_ops());
        }
    }
};

// Directive tracking in `whitespace` above is conservative; recompute the
// directive extent here: a directive ends at the first newline that is not
// immediately preceded by a backslash.
void fix_directive_flags(std::string_view text, std::vector<Token>& tokens) {
    bool active = false;
    for (auto& t : tokens) {
        if (t.kind == TokenKind::Whitespace) {
            if (active) {
                for (std::size_t i = t.begin; i < t.end; ++i) {
                    if (text[i] == '\n' && (i == 0 || text[i - 1] != '\\')) {
                        active = false;
                        break;
                    }
                }
            }
            t.in_directive = false;
            continue;
        }
        if (!active && t.kind == TokenKind::Punct && t.end - t.begin == 1 && text[t.begin] == '#' &&
            t.in_directive) {
            active = true;
        }
        t.in_directive = active;
        if (t.kind == TokenKind::Comment && active) {
            // a // comment swallows the rest of the line
            if (text.substr(t.begin, 2) == "//") active = false;
        }
    }
}

void mark_statement_starts(std::string_view text, Language lang, std::vector<Token>& tokens) {
    const Token* prev = nullptr;
    std::size_t prev_idx = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        Token& t = tokens[i];
        if (is_trivia(t.kind)) continue;
        bool start = false;
        if (prev == nullptr) {
            start = true;
        } else {
            std::string_view pl = lexeme_of(text, *prev);
            if (pl == ";") start = true;
            if (lang != Language::Fortran && (pl == "{" || pl == "}")) start = true;
            if (!start) {
                bool newline_between = false;
                for (std::size_t j = prev_idx + 1; j < i; ++j) {
                    const Token& w = tokens[j];
                    if (w.kind == TokenKind::Whitespace || w.kind == TokenKind::Comment) {
                        auto s = lexeme_of(text, w);
                        if (s.find('\n') != std::string_view::npos) {
                            newline_between = true;
                            break;
                        }
                    }
                }
                if (newline_between) {
                    if (lang == Language::Fortran)
                        start = pl != "&";
                    else
                        start = prev->in_directive && !t.in_directive;
                }
            }
        }
        t.stmt_start = start;
        prev = &t;
        prev_idx = i;
    }
}

} // namespace

bool is_keyword(std::string_view lexeme, Language lang) {
    if (lang == Language::Fortran) {
        std::string low;
        low.reserve(lexeme.size());
        for (char c : lexeme)
            low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        return fortran_keywords().count(low) > 0;
    }
    const auto& kw = lang == Language::C ? c_keywords() : cpp_keywords();
    return kw.count(std::string(lexeme)) > 0;
}

LexResult lex(std::string_view text, Language lang) {
    Lexer lx{text, lang};
    if (lang == Language::Fortran)
        lx.run_fortran();
    else
        lx.run_c_family();
    fix_directive_flags(text, lx.out.tokens);
    mark_statement_starts(text, lang, lx.out.tokens);
    return lx.out;
}

} // namespace tokompiler
