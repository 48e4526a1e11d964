#include "tokompiler/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "tokompiler/errors.hpp"

namespace tokompiler {

std::string to_string(Category c) {
    switch (c) {
        case Category::Func: return "func";
        case Category::Var: return "var";
        case Category::Arr: return "arr";
        case Category::Num: return "num";
        case Category::Str: return "str";
    }
    return "var";
}

Category category_from_string(const std::string& s) {
    if (s == "func") return Category::Func;
    if (s == "var") return Category::Var;
    if (s == "arr") return Category::Arr;
    if (s == "num") return Category::Num;
    if (s == "str") return Category::Str;
    throw std::runtime_error("unknown category: " + s);
}

namespace {

std::string lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

int next_nontrivia(const std::vector<Token>& tokens, int i) {
    for (int j = i + 1; j < static_cast<int>(tokens.size()); ++j)
        if (!is_trivia(tokens[j].kind)) return j;
    return -1;
}

int prev_nontrivia(const std::vector<Token>& tokens, int i) {
    for (int j = i - 1; j >= 0; --j)
        if (!is_trivia(tokens[j].kind)) return j;
    return -1;
}

// ---------------------------------------------------------------------------
// Tree construction
// ---------------------------------------------------------------------------

struct TreeBuilder {
    SyntaxTree tree;
    std::vector<std::uint32_t> stack;  // open nodes, root at [0]

    explicit TreeBuilder(std::vector<Token> tokens, int lex_errors) {
        tree.tokens = std::move(tokens);
        tree.error_count = lex_errors;
        tree.nodes.push_back({NodeKind::TranslationUnit});
        stack.push_back(0);
    }

    std::uint32_t add_leaf(int token_idx) {
        const Token& t = tree.tokens[token_idx];
        Node leaf{NodeKind::Leaf, t.begin, t.end, {}, token_idx, -1};
        tree.nodes.push_back(leaf);
        const auto idx = static_cast<std::uint32_t>(tree.nodes.size() - 1);
        tree.nodes[stack.back()].children.push_back(idx);
        return idx;
    }

    void open(NodeKind kind) {
        tree.nodes.push_back({kind});
        const auto idx = static_cast<std::uint32_t>(tree.nodes.size() - 1);
        tree.nodes[stack.back()].children.push_back(idx);
        stack.push_back(idx);
    }

    void close() {
        Node& n = tree.nodes[stack.back()];
        if (!n.children.empty()) {
            n.begin = tree.nodes[n.children.front()].begin;
            n.end = tree.nodes[n.children.back()].end;
        }
        stack.pop_back();
    }

    NodeKind top_kind() const { return tree.nodes[stack.back()].kind; }

    void finish(std::size_t text_size) {
        while (stack.size() > 1) {
            if (top_kind() != NodeKind::Directive && top_kind() != NodeKind::FunctionDefinition)
                ++tree.error_count;  // unclosed group
            close();
        }
        tree.nodes[0].begin = 0;
        tree.nodes[0].end = text_size;
    }
};

NodeKind group_kind_for(char open_char) {
    switch (open_char) {
        case '(': return NodeKind::ParenGroup;
        case '[': return NodeKind::BracketGroup;
        default: return NodeKind::BraceGroup;
    }
}

char closer_for(NodeKind k) {
    switch (k) {
        case NodeKind::ParenGroup: return ')';
        case NodeKind::BracketGroup: return ']';
        case NodeKind::BraceGroup: return '}';
        default: return '\0';
    }
}

// C/C++: nested delimiter groups plus directive wrapping.
void build_c_family(TreeBuilder& b, std::string_view text) {
    const auto& tokens = b.tree.tokens;
    std::size_t directive_depth_base = 0;
    bool in_directive_node = false;

    auto close_directive = [&]() {
        // force-close the directive and any groups opened inside it;
        // unbalanced delimiters in macro bodies are legal, so no error is
        // charged
        while (b.stack.size() >= directive_depth_base) b.close();
        in_directive_node = false;
    };

    for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
        const Token& t = tokens[i];
        if (t.kind == TokenKind::Whitespace) {
            if (in_directive_node) {
                const auto ws = lexeme_of(text, t);
                bool terminating = false;
                for (std::size_t k = 0; k < ws.size(); ++k) {
                    if (ws[k] == '\n') {
                        const std::size_t abs = t.begin + k;
                        if (abs == 0 || text[abs - 1] != '\\') {
                            terminating = true;
                            break;
                        }
                    }
                }
                if (terminating) close_directive();
            }
            b.add_leaf(i);
            continue;
        }
        if (t.in_directive && !in_directive_node) {
            b.open(NodeKind::Directive);
            in_directive_node = true;
            directive_depth_base = b.stack.size();
        } else if (!t.in_directive && in_directive_node) {
            close_directive();
        }
        if (t.kind == TokenKind::Punct && t.end - t.begin == 1) {
            const char c = text[t.begin];
            if (c == '(' || c == '[' || c == '{') {
                b.open(group_kind_for(c));
                b.add_leaf(i);
                continue;
            }
            if (c == ')' || c == ']' || c == '}') {
                if (closer_for(b.top_kind()) == c) {
                    b.add_leaf(i);
                    b.close();
                } else {
                    b.add_leaf(i);
                    ++b.tree.error_count;  // stray or mismatched closer
                }
                continue;
            }
        }
        b.add_leaf(i);
    }
    if (in_directive_node) close_directive();
}

bool is_punct_lexeme(const SyntaxTree& tree, std::string_view text, std::uint32_t node,
                     std::string_view expect) {
    const Node& n = tree.nodes[node];
    if (n.kind != NodeKind::Leaf) return false;
    const Token& t = tree.tokens[n.token];
    return t.kind == TokenKind::Punct && lexeme_of(text, t) == expect;
}

// Group top-level `<decl tokens> name ( params ) [specifiers] { body }`
// sequences under FunctionDefinition nodes.
void fold_c_functions(SyntaxTree& tree, std::string_view text, Language lang) {
    // copy: tree.nodes reallocates as definitions are folded in
    const std::vector<std::uint32_t> root_children = tree.nodes[0].children;
    std::vector<std::uint32_t> rebuilt;
    rebuilt.reserve(root_children.size());

    auto is_trivia_node = [&](std::uint32_t idx) {
        const Node& n = tree.nodes[idx];
        return n.kind == NodeKind::Leaf && is_trivia(tree.tokens[n.token].kind);
    };

    for (std::size_t i = 0; i < root_children.size(); ++i) {
        const std::uint32_t child = root_children[i];
        rebuilt.push_back(child);
        if (tree.nodes[child].kind != NodeKind::BraceGroup) continue;

        // walk back in the rebuilt list: optional specifier leaves, then the
        // parameter ParenGroup, then the name identifier
        auto back_nontrivia = [&](std::size_t from) -> std::optional<std::size_t> {
            std::size_t j = from;
            while (j-- > 0)
                if (!is_trivia_node(rebuilt[j])) return j;
            return std::nullopt;
        };

        std::size_t brace_pos = rebuilt.size() - 1;
        auto cur = back_nontrivia(brace_pos);
        // specifiers between `)` and `{`: identifier-ish leaves only
        while (cur) {
            const Node& n = tree.nodes[rebuilt[*cur]];
            if (n.kind == NodeKind::Leaf && tree.tokens[n.token].kind == TokenKind::Identifier)
                cur = back_nontrivia(*cur);
            else
                break;
        }
        if (!cur || tree.nodes[rebuilt[*cur]].kind != NodeKind::ParenGroup) continue;
        auto name_pos = back_nontrivia(*cur);
        if (!name_pos) continue;
        const Node& name_node = tree.nodes[rebuilt[*name_pos]];
        if (name_node.kind != NodeKind::Leaf) continue;
        const Token& name_tok = tree.tokens[name_node.token];
        if (name_tok.kind != TokenKind::Identifier || is_keyword(lexeme_of(text, name_tok), lang))
            continue;

        // declaration start: walk back over plain leaves and groups until a
        // boundary (`;`, previous body, directive, or start of file)
        std::size_t start = *name_pos;
        std::size_t j = *name_pos;
        while (j > 0) {
            const std::uint32_t cand = rebuilt[j - 1];
            const Node& n = tree.nodes[cand];
            if (n.kind == NodeKind::BraceGroup || n.kind == NodeKind::Directive ||
                n.kind == NodeKind::FunctionDefinition)
                break;
            if (is_punct_lexeme(tree, text, cand, ";") || is_punct_lexeme(tree, text, cand, "}"))
                break;
            --j;
            if (!is_trivia_node(cand)) start = j;
        }

        Node fn{NodeKind::FunctionDefinition};
        fn.name_token = name_node.token;
        fn.children.assign(rebuilt.begin() + start, rebuilt.end());
        fn.begin = tree.nodes[fn.children.front()].begin;
        fn.end = tree.nodes[fn.children.back()].end;
        tree.nodes.push_back(std::move(fn));
        const auto fn_idx = static_cast<std::uint32_t>(tree.nodes.size() - 1);
        rebuilt.resize(start);
        rebuilt.push_back(fn_idx);
    }
    tree.nodes[0].children = std::move(rebuilt);
}

// ---------------------------------------------------------------------------
// Fortran block structure
// ---------------------------------------------------------------------------

struct FortranStmt {
    std::vector<int> toks;  // non-trivia token indices
};

std::vector<FortranStmt> split_statements(const std::vector<Token>& tokens) {
    std::vector<FortranStmt> stmts;
    for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
        if (is_trivia(tokens[i].kind)) continue;
        if (tokens[i].stmt_start || stmts.empty()) stmts.push_back({});
        stmts.back().toks.push_back(i);
    }
    return stmts;
}

struct FortranScan {
    // top-level procedure spans as [first_token, last_token] inclusive
    std::vector<std::pair<int, int>> proc_spans;
    std::vector<int> proc_names;  // name token per span, -1 if unknown
    int errors = 0;
};

FortranScan scan_fortran_blocks(const std::vector<Token>& tokens, std::string_view text) {
    FortranScan out;
    const auto stmts = split_statements(tokens);

    struct Block {
        std::string kind;
        bool is_proc;
        int start_tok;
        int name_tok;
    };
    std::vector<Block> stack;
    auto proc_depth = [&] {
        int d = 0;
        for (const auto& b : stack) d += b.is_proc ? 1 : 0;
        return d;
    };

    for (const auto& stmt : stmts) {
        if (stmt.toks.empty()) continue;
        std::vector<std::string> low;
        low.reserve(stmt.toks.size());
        for (int t : stmt.toks) low.push_back(lower(lexeme_of(text, tokens[t])));

        std::size_t k = 0;
        // numeric label / construct-name prefix
        if (tokens[stmt.toks[0]].kind == TokenKind::Number) k = 1;
        if (k + 1 < stmt.toks.size() && tokens[stmt.toks[k]].kind == TokenKind::Identifier &&
            low[k + 1] == ":")
            k += 2;
        if (k >= stmt.toks.size()) continue;
        const std::string& first = low[k];
        const Token& first_tok = tokens[stmt.toks[k]];
        if (first_tok.kind != TokenKind::Identifier) continue;
        if (first_tok.in_directive) continue;

        auto close_block = [&](const std::string& hint) {
            if (stack.empty()) {
                ++out.errors;
                return;
            }
            Block b = stack.back();
            stack.pop_back();
            if (!hint.empty() && hint != b.kind) ++out.errors;
            if (b.is_proc && proc_depth() == 0) {
                out.proc_spans.emplace_back(b.start_tok, stmt.toks.back());
                out.proc_names.push_back(b.name_tok);
            }
        };

        static const std::unordered_map<std::string, std::string> end_variants = {
            {"endif", "if"},           {"enddo", "do"},
            {"endselect", "select"},   {"endfunction", "function"},
            {"endsubroutine", "subroutine"}, {"endprogram", "program"},
            {"endmodule", "module"},   {"endtype", "type"},
            {"endinterface", "interface"}, {"endwhere", "where"},
            {"endblock", "block"},
        };
        if (first == "end") {
            std::string hint;
            if (k + 1 < low.size() && tokens[stmt.toks[k + 1]].kind == TokenKind::Identifier)
                hint = low[k + 1];
            close_block(hint);
            continue;
        }
        if (auto it = end_variants.find(first); it != end_variants.end()) {
            close_block(it->second);
            continue;
        }

        // procedure header: subroutine/function keyword before any `::` or `=`
        int proc_kw = -1;
        for (std::size_t j = k; j < low.size(); ++j) {
            if (low[j] == "::" || low[j] == "=") break;
            if (low[j] == "subroutine" || low[j] == "function") {
                proc_kw = static_cast<int>(j);
                break;
            }
        }
        if (proc_kw >= 0) {
            int name_tok = -1;
            std::string kind = low[proc_kw];
            if (proc_kw + 1 < static_cast<int>(low.size()) &&
                tokens[stmt.toks[proc_kw + 1]].kind == TokenKind::Identifier)
                name_tok = stmt.toks[proc_kw + 1];
            stack.push_back({kind, true, stmt.toks.front(), name_tok});
            continue;
        }

        if (first == "program" || first == "module" || first == "interface" ||
            first == "block" || first == "associate") {
            if (first == "module" && k + 1 < low.size() && low[k + 1] == "procedure") continue;
            stack.push_back({first, false, stmt.toks.front(), -1});
            continue;
        }
        if (first == "type") {
            if (k + 1 < low.size() && low[k + 1] != "(")
                stack.push_back({"type", false, stmt.toks.front(), -1});
            continue;
        }
        if (first == "if" && low.back() == "then") {
            stack.push_back({"if", false, stmt.toks.front(), -1});
            continue;
        }
        if (first == "do") {
            stack.push_back({"do", false, stmt.toks.front(), -1});
            continue;
        }
        if (first == "select") {
            stack.push_back({"select", false, stmt.toks.front(), -1});
            continue;
        }
        if (first == "where" || first == "forall") {
            // construct form only: nothing after the closing mask paren
            int depth = 0;
            std::size_t after = low.size();
            for (std::size_t j = k + 1; j < low.size(); ++j) {
                if (low[j] == "(") ++depth;
                if (low[j] == ")") {
                    --depth;
                    if (depth == 0) {
                        after = j + 1;
                        break;
                    }
                }
            }
            if (after == low.size())
                stack.push_back({std::string(first), false, stmt.toks.front(), -1});
            continue;
        }
    }
    out.errors += static_cast<int>(stack.size());  // unclosed blocks
    return out;
}

void build_fortran(TreeBuilder& b, std::string_view text, const FortranScan& scan) {
    const auto& tokens = b.tree.tokens;
    b.tree.error_count += scan.errors;

    std::size_t next_span = 0;
    int open_span_end = -1;
    std::size_t span_depth_base = 0;

    for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
        const Token& t = tokens[i];
        if (open_span_end < 0 && next_span < scan.proc_spans.size() &&
            i == scan.proc_spans[next_span].first) {
            b.open(NodeKind::FunctionDefinition);
            b.tree.nodes[b.stack.back()].name_token = scan.proc_names[next_span];
            open_span_end = scan.proc_spans[next_span].second;
            span_depth_base = b.stack.size();
            ++next_span;
        }
        if (!is_trivia(t.kind) && t.kind == TokenKind::Punct) {
            const auto lx = lexeme_of(text, t);
            if (lx == "(") {
                b.open(NodeKind::ParenGroup);
                b.add_leaf(i);
            } else if (lx == ")") {
                if (b.top_kind() == NodeKind::ParenGroup) {
                    b.add_leaf(i);
                    b.close();
                } else {
                    b.add_leaf(i);
                    ++b.tree.error_count;
                }
            } else {
                b.add_leaf(i);
            }
        } else {
            b.add_leaf(i);
        }
        if (open_span_end == i) {
            while (b.stack.size() > span_depth_base) {
                ++b.tree.error_count;
                b.close();
            }
            b.close();  // FunctionDefinition
            open_span_end = -1;
        }
    }
}

} // namespace

SyntaxTree parse(const SourceUnit& unit) {
    if (unit.text.empty()) throw std::invalid_argument("empty source unit: " + unit.id);
    LexResult lx = lex(unit.text, unit.language);
    TreeBuilder builder(std::move(lx.tokens), lx.error_count);
    if (unit.language == Language::Fortran) {
        const FortranScan scan = scan_fortran_blocks(builder.tree.tokens, unit.text);
        build_fortran(builder, unit.text, scan);
    } else {
        build_c_family(builder, unit.text);
    }
    builder.finish(unit.text.size());
    if (unit.language != Language::Fortran)
        fold_c_functions(builder.tree, unit.text, unit.language);
    if (builder.tree.nodes.empty()) throw CatastrophicParseFailure("no tree for " + unit.id);
    return builder.tree;
}

std::vector<int> structural_shape(const SyntaxTree& tree) {
    std::vector<int> counts(7, 0);
    for (const Node& n : tree.nodes)
        if (n.kind != NodeKind::Leaf) counts[static_cast<int>(n.kind)]++;
    return counts;
}

namespace {

struct Evidence {
    bool func_decl = false;
    bool func_use = false;
    bool arr_decl = false;
    bool arr_use = false;
    bool type_pos = false;
};

void collect_function_names(const SyntaxTree& tree, std::unordered_set<int>& out) {
    for (const Node& n : tree.nodes)
        if (n.kind == NodeKind::FunctionDefinition && n.name_token >= 0)
            out.insert(n.name_token);
}

// Fortran type-declaration statements: their `name(...)` forms declare arrays.
std::vector<bool> fortran_decl_tokens(const std::vector<Token>& tokens, std::string_view text) {
    static const std::unordered_set<std::string> decl_heads = {
        "integer", "real", "double", "complex", "logical", "character", "dimension",
        "parameter", "allocatable", "pointer", "type",
    };
    std::vector<bool> in_decl(tokens.size(), false);
    for (const auto& stmt : split_statements(tokens)) {
        if (stmt.toks.empty()) continue;
        const std::string head = lower(lexeme_of(text, tokens[stmt.toks[0]]));
        if (decl_heads.count(head) == 0) continue;
        bool has_proc_kw = false;
        for (int t : stmt.toks) {
            const std::string l = lower(lexeme_of(text, tokens[t]));
            if (l == "::") break;
            if (l == "subroutine" || l == "function") {
                has_proc_kw = true;
                break;
            }
        }
        if (has_proc_kw) continue;
        for (int t : stmt.toks) in_decl[t] = true;
    }
    return in_decl;
}

} // namespace

std::vector<IdentifierOccurrence> classify_occurrences(const SyntaxTree& tree,
                                                       const SourceUnit& unit) {
    const std::string_view text = unit.text;
    const auto& tokens = tree.tokens;
    const Language lang = unit.language;
    const bool fortran = lang == Language::Fortran;

    std::unordered_set<int> fn_names;
    collect_function_names(tree, fn_names);
    const std::vector<bool> in_decl =
        fortran ? fortran_decl_tokens(tokens, text) : std::vector<bool>(tokens.size(), false);

    struct RawOcc {
        int token;
        Category cat;  // Num/Str final; identifiers resolved below
        bool is_ident;
        bool decl_site;
    };
    std::vector<RawOcc> raw;
    std::unordered_map<std::string, Evidence> evidence;

    for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
        const Token& t = tokens[i];
        if (is_trivia(t.kind) || t.kind == TokenKind::Error) continue;
        if (t.kind == TokenKind::Number) {
            raw.push_back({i, Category::Num, false, false});
            continue;
        }
        if (t.kind == TokenKind::String) {
            raw.push_back({i, Category::Str, false, false});
            continue;
        }
        if (t.kind != TokenKind::Identifier) continue;
        const std::string lx(lexeme_of(text, t));
        if (is_keyword(lx, lang)) continue;
        if (t.in_directive) continue;  // directive identifiers stay verbatim

        Evidence& ev = evidence[lx];
        bool decl_site = false;
        const int ni = next_nontrivia(tokens, i);
        const std::string_view next =
            ni >= 0 ? lexeme_of(text, tokens[ni]) : std::string_view{};
        if (!fortran) {
            if (fn_names.count(i)) {
                ev.func_decl = true;
                decl_site = true;
            }
            if (next == "(") ev.func_use = true;
            if (next == "[") ev.arr_use = true;
            if (ni >= 0 && tokens[ni].kind == TokenKind::Identifier &&
                !is_keyword(next, lang) && !tokens[ni].in_directive)
                ev.type_pos = true;
        } else {
            const int pi = prev_nontrivia(tokens, i);
            const std::string prev = pi >= 0 ? lower(lexeme_of(text, tokens[pi])) : "";
            if (prev == "call" || prev == "subroutine" || prev == "function" ||
                prev == "program" || prev == "module") {
                ev.func_decl = true;
                decl_site = prev != "call";
            }
            if (next == "(") {
                if (in_decl[i]) {
                    ev.arr_decl = true;
                    decl_site = true;
                } else {
                    ev.func_use = true;
                }
            }
        }
        raw.push_back({i, Category::Var, true, decl_site});
    }

    std::vector<IdentifierOccurrence> out;
    out.reserve(raw.size());
    for (const RawOcc& r : raw) {
        const Token& t = tokens[r.token];
        IdentifierOccurrence occ;
        occ.begin = t.begin;
        occ.end = t.end;
        occ.lexeme = std::string(lexeme_of(text, t));
        occ.decl_site = r.decl_site;
        if (!r.is_ident) {
            occ.category = r.cat;
        } else {
            const Evidence& ev = evidence[occ.lexeme];
            if (ev.type_pos && !fortran) continue;  // treated as a type name
            if (ev.func_decl)
                occ.category = Category::Func;
            else if (ev.arr_decl || ev.arr_use)
                occ.category = Category::Arr;
            else if (ev.func_use)
                occ.category = Category::Func;
            else
                occ.category = Category::Var;
        }
        out.push_back(std::move(occ));
    }
    return out;
}

std::vector<SourceUnit> extract_functions(const SyntaxTree& tree, const SourceUnit& unit) {
    std::vector<SourceUnit> out;
    int counter = 0;
    for (std::uint32_t child : tree.root().children) {
        const Node& n = tree.nodes[child];
        if (n.kind != NodeKind::FunctionDefinition) continue;
        SourceUnit fn;
        std::string name = "anon";
        if (n.name_token >= 0)
            name = std::string(lexeme_of(unit.text, tree.tokens[n.name_token]));
        fn.id = unit.id + "#" + std::to_string(counter++) + ":" + name;
        fn.language = unit.language;
        fn.origin = unit.origin + "#" + name;
        fn.text = unit.text.substr(n.begin, n.end - n.begin);
        out.push_back(std::move(fn));
    }
    return out;
}

} // namespace tokompiler
