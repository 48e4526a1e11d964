#pragma once

#include <cstdint>
#include <optional>

#include "tokompiler/anonymizer.hpp"
#include "tokompiler/lexicalizer.hpp"
#include "tokompiler/parser.hpp"

namespace tokompiler {

struct PipelineConfig {
    IdRange range;
    bool derive_per_unit_seed = true;  // seed ^= fnv1a(unit_id)
};

struct PipelineResult {
    AnonymizedUnit anonymized;
    std::string normalized;
    TokenStream stream;
    int parse_errors = 0;
};

/// parse -> classify -> anonymize -> regenerate -> lexicalize (-> encode).
PipelineResult tokenize_unit(const SourceUnit& unit, std::uint64_t run_seed,
                             const PipelineConfig& config = {},
                             const Vocabulary* vocab = nullptr);

/// Token count of the full pipeline without materializing it: non-trivia
/// leaves plus one extra token per replaced occurrence (the split).
std::size_t tokompiler_token_count(const SyntaxTree& tree, const SourceUnit& unit);

} // namespace tokompiler
