#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tokompiler/parser.hpp"
#include "tokompiler/source_unit.hpp"

namespace tokompiler {

struct IdRange {
    std::int64_t lo = 1;
    std::int64_t hi = 1000;
};

struct DictEntry {
    std::string replacement;  // e.g. "var_17"
    std::string original;     // exact source lexeme
    Category category;
};

/// Per-unit bijective mapping between replacement tokens and originals.
struct ChangeDictionary {
    std::string unit_id;
    std::uint64_t seed = 0;
    std::vector<DictEntry> entries;

    std::optional<std::string> original_of(const std::string& replacement) const;
    std::optional<std::string> replacement_of(const std::string& original) const;
};

struct AnonymizedUnit {
    std::string unit_id;
    std::string text;
    ChangeDictionary dictionary;
    std::map<Category, std::size_t> category_counts;
    std::vector<std::string> warnings;  // e.g. range widening
};

struct AnonymizeConfig {
    IdRange range;
};

constexpr std::size_t kCategoryCount = 5;

struct IdAssignment {
    std::array<std::vector<std::int64_t>, kCategoryCount> ids;  // indexed by Category
    std::vector<std::string> warnings;
};

/// Deterministic per-category ID draw, uniform without replacement. A
/// category whose count exceeds the range is served from a x10-widened
/// range (repeatedly), with a warning recorded.
IdAssignment assign_ids(const std::array<std::size_t, kCategoryCount>& counts,
                        std::uint64_t seed, IdRange range);

AnonymizedUnit anonymize(const SourceUnit& unit, const SyntaxTree& tree,
                         const std::vector<IdentifierOccurrence>& occurrences,
                         std::uint64_t seed, const AnonymizeConfig& config = {});

/// True for tokens shaped `<category>_<n>`.
bool is_replacement_token(const std::string& token);

/// Substitute replacement tokens by their originals in a whitespace-joined
/// token text. Split pairs (`var`, `17`) are re-joined first.
std::string restore(const std::string& text, const ChangeDictionary& dict);
std::vector<std::string> restore(const std::vector<std::string>& tokens,
                                 const ChangeDictionary& dict);

std::string dictionary_to_json(const ChangeDictionary& dict);
ChangeDictionary dictionary_from_json(const std::string& json_text);

} // namespace tokompiler
