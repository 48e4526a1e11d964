#include "tokompiler/pipeline.hpp"

#include "tokompiler/rng.hpp"

namespace tokompiler {

PipelineResult tokenize_unit(const SourceUnit& unit, std::uint64_t run_seed,
                             const PipelineConfig& config, const Vocabulary* vocab) {
    const SyntaxTree tree = parse(unit);
    const auto occurrences = classify_occurrences(tree, unit);
    const std::uint64_t seed =
        config.derive_per_unit_seed ? derive_unit_seed(run_seed, unit.id) : run_seed;

    PipelineResult result;
    result.parse_errors = tree.error_count;
    result.anonymized = anonymize(unit, tree, occurrences, seed, {config.range});
    result.normalized = regenerate(result.anonymized, unit.language);
    result.stream = lexicalize(result.normalized, unit.id);
    if (vocab) result.stream = encode(std::move(result.stream), *vocab);
    return result;
}

std::size_t tokompiler_token_count(const SyntaxTree& tree, const SourceUnit& unit) {
    std::size_t count = 0;
    for (const Token& t : tree.tokens)
        if (!is_trivia(t.kind) && t.kind != TokenKind::Error) ++count;
    count += classify_occurrences(tree, unit).size();  // each replacement splits in two
    return count;
}

} // namespace tokompiler
