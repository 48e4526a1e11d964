#pragma once

#include <string>
#include <vector>

#include "tokompiler/anonymizer.hpp"
#include "tokompiler/vocabulary.hpp"

namespace tokompiler {

/// Ordered lexical tokens after regeneration and splitting. `ids` and
/// `oov_mask` are populated by encode().
struct TokenStream {
    std::string unit_id;
    std::vector<std::string> tokens;
    std::vector<int> ids;
    std::vector<bool> oov_mask;
};

/// Single-line, single-space-separated form of the anonymized unit with
/// comments and original formatting removed. Token order is parse-leaf order.
std::string regenerate(const AnonymizedUnit& anonymized, Language language);

/// Whitespace split plus replacement-token split (`var_1` -> `var`, `1`).
TokenStream lexicalize(const std::string& normalized_text, const std::string& unit_id = "");

TokenStream encode(TokenStream stream, const Vocabulary& vocab);
std::vector<std::string> decode(const std::vector<int>& ids, const Vocabulary& vocab);

std::string token_stream_to_jsonl(const TokenStream& stream);
TokenStream token_stream_from_jsonl(const std::string& line);

} // namespace tokompiler
