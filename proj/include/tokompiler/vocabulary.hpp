#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace tokompiler {

struct TokenStream;

inline constexpr const char* kUnkToken = "<unk>";
inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kEosToken = "<eos>";
inline constexpr int kUnkId = 0;
inline constexpr int kPadId = 1;
inline constexpr int kEosId = 2;

/// Closed token set with dense 0-based IDs; specials occupy IDs 0..2.
struct Vocabulary {
    enum class Provenance { Built, Loaded };

    std::vector<std::string> tokens;
    std::unordered_map<std::string, int> id_of;
    Provenance provenance = Provenance::Built;

    std::size_t size() const { return tokens.size(); }
    int lookup(const std::string& token) const {
        auto it = id_of.find(token);
        return it == id_of.end() ? kUnkId : it->second;
    }
    bool contains(const std::string& token) const { return id_of.count(token) > 0; }
};

struct VocabBuildConfig {
    bool include_full_number_range = true;  // keeps randomized ids out of OOV
    std::int64_t number_lo = 1;
    std::int64_t number_hi = 1000;
    bool include_category_words = true;
};

/// Specials, then all distinct observed tokens plus (by config) category
/// words and the full number range, in sorted order.
Vocabulary build_vocabulary(const std::vector<TokenStream>& corpus_streams,
                            const VocabBuildConfig& config = {});

struct OovReport {
    std::uint64_t oov_tokens = 0;
    std::uint64_t total_tokens = 0;
    double rate() const {
        return total_tokens ? static_cast<double>(oov_tokens) / static_cast<double>(total_tokens)
                            : 0.0;
    }
};

OovReport oov_rate(const Vocabulary& vocab, const std::vector<TokenStream>& held_out);

/// One token per line, LF newlines; line number - 1 is the ID.
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);
std::string vocabulary_to_text(const Vocabulary& vocab);
Vocabulary vocabulary_from_text(const std::string& body);

} // namespace tokompiler
