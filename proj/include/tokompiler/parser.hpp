#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tokompiler/lexer.hpp"
#include "tokompiler/source_unit.hpp"

namespace tokompiler {

enum class NodeKind {
    TranslationUnit,
    FunctionDefinition,
    ParenGroup,
    BracketGroup,
    BraceGroup,
    Directive,
    Leaf,
};

struct Node {
    NodeKind kind;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::vector<std::uint32_t> children;
    std::int32_t token = -1;       // leaf: index into tokens
    std::int32_t name_token = -1;  // FunctionDefinition: name identifier
};

/// Immutable concrete-tree snapshot. Leaves (including whitespace and
/// comment trivia) partition the input byte range exactly.
struct SyntaxTree {
    std::vector<Token> tokens;
    std::vector<Node> nodes;  // nodes[0] is the root
    int error_count = 0;

    const Node& root() const { return nodes[0]; }
};

enum class Category { Func, Var, Arr, Num, Str };

std::string to_string(Category c);
Category category_from_string(const std::string& s);

struct IdentifierOccurrence {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string lexeme;
    Category category = Category::Var;
    bool decl_site = false;
};

/// Tolerant parse: never aborts on recoverable syntax errors; unmatched
/// delimiters and unterminated literals bump error_count instead.
SyntaxTree parse(const SourceUnit& unit);

/// Every identifier, numeric literal, and string literal leaf that the
/// anonymizer must replace, sorted by span start. Keywords, punctuation,
/// type names, and identifiers inside preprocessor directives are excluded.
std::vector<IdentifierOccurrence> classify_occurrences(const SyntaxTree& tree,
                                                       const SourceUnit& unit);

/// One unit per top-level function definition (C/C++) or procedure
/// (Fortran subroutine/function). Nested definitions are not split out.
std::vector<SourceUnit> extract_functions(const SyntaxTree& tree, const SourceUnit& unit);

/// Multiset of structural (non-leaf) node kinds; anonymization preserves it.
std::vector<int> structural_shape(const SyntaxTree& tree);

} // namespace tokompiler
