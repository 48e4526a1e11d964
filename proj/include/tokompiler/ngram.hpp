#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tokompiler/lexicalizer.hpp"

namespace tokompiler {

/// Add-k smoothed n-gram language model over token streams. The event space
/// is the training vocabulary plus one bucket for unseen tokens, so held-out
/// probabilities stay proper.
struct NgramModel {
    int order = 3;
    double add_k = 0.01;
    std::unordered_map<std::string, std::unordered_map<std::string, std::uint64_t>> counts;
    std::unordered_map<std::string, std::uint64_t> context_totals;
    std::unordered_set<std::string> vocab;

    std::size_t event_space() const { return vocab.size() + 1; }
    double log_prob(const std::vector<std::string>& context, const std::string& token) const;
};

NgramModel train_ngram(const std::vector<TokenStream>& streams, int order, double add_k);

enum class Normalizer { PerToken, PerSourceChar };

struct EvalUnit {
    TokenStream stream;
    std::uint64_t source_chars = 0;  // original-source character count
};

/// exp(total NLL / normalizer count). PerSourceChar divides by original
/// source characters, making values comparable across tokenizers.
double normalized_perplexity(const NgramModel& model, const std::vector<EvalUnit>& held_out,
                             Normalizer normalizer);

} // namespace tokompiler
