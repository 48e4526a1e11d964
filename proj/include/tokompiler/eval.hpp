#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tokompiler/bpe.hpp"
#include "tokompiler/ngram.hpp"
#include "tokompiler/pipeline.hpp"
#include "tokompiler/source_unit.hpp"
#include "tokompiler/vocabulary.hpp"

namespace tokompiler {

struct TokenizerAggregate {
    std::string name;
    std::uint64_t vocab_size = 0;
    std::uint64_t total_tokens = 0;
    double mean_tokens_per_unit = 0.0;
    std::optional<double> oov_rate;
    std::optional<double> ppl_per_token;
    std::optional<double> ppl_per_source_char;
};

struct UnitRow {
    std::string unit_id;
    std::uint64_t tokompiler_count = 0;
    std::uint64_t bpe_count = 0;
};

struct ComparisonReport {
    TokenizerAggregate tokompiler;
    TokenizerAggregate bpe;
    std::vector<UnitRow> rows;
    double reduction_ratio = 0.0;  // tokompiler total / bpe total

    std::string to_json() const;
    std::string to_table() const;
};

ComparisonReport compare_token_counts(const std::vector<SourceUnit>& units,
                                      std::uint64_t run_seed, const PipelineConfig& config,
                                      const Vocabulary& vocab, const BpeModel& bpe_model);

struct PerplexityOptions {
    int order = 3;
    double add_k = 0.01;
    double train_fraction = 0.8;  // leading fraction of units trains, rest evaluates
};

/// Train/held-out n-gram perplexities for both tokenizers over the same
/// units, attached to an existing token-count report.
void attach_perplexities(ComparisonReport& report, const std::vector<SourceUnit>& units,
                         std::uint64_t run_seed, const PipelineConfig& config,
                         const Vocabulary& vocab, const BpeModel& bpe_model,
                         const PerplexityOptions& options = {});

} // namespace tokompiler
