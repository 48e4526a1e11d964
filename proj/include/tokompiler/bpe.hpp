#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tokompiler {

/// Byte-level BPE with GPT-style pre-tokenization: merges are learned and
/// applied only inside runs of letters or runs of digits, so whitespace and
/// punctuation always stay single-byte tokens. Any input encodes (no OOV).
struct BpeModel {
    std::size_t target_size = 50000;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> merges;  // training order

    std::size_t vocab_size() const { return 256 + merges.size(); }
};

/// Greedy most-frequent-pair training until target_size or no pair repeats.
/// Ties break on the lexicographically smallest pair. sample_fraction picks
/// a random subset of the corpus texts with the shared seeded RNG.
BpeModel train_bpe(const std::vector<std::string>& corpus, std::size_t target_size,
                   double sample_fraction = 1.0, std::uint64_t seed = 0);

std::vector<std::string> encode_bpe(const BpeModel& model, std::string_view text);
std::size_t count_bpe_tokens(const BpeModel& model, std::string_view text);

void save_bpe(const BpeModel& model, const std::string& path);
BpeModel load_bpe(const std::string& path);

} // namespace tokompiler
