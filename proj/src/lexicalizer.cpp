#include "tokompiler/lexicalizer.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "tokompiler/errors.hpp"
#include "tokompiler/parser.hpp"

namespace tokompiler {

std::string regenerate(const AnonymizedUnit& anonymized, Language language) {
    SourceUnit unit;
    unit.id = anonymized.unit_id;
    unit.language = language;
    unit.text = anonymized.text;
    const SyntaxTree tree = parse(unit);
    std::string out;
    for (const Token& t : tree.tokens) {
        if (is_trivia(t.kind) || t.kind == TokenKind::Error) continue;
        if (!out.empty()) out.push_back(' ');
        out.append(lexeme_of(unit.text, t));
    }
    return out;
}

TokenStream lexicalize(const std::string& normalized_text, const std::string& unit_id) {
    TokenStream stream;
    stream.unit_id = unit_id;
    std::istringstream in(normalized_text);
    std::string tok;
    while (in >> tok) {
        if (is_replacement_token(tok)) {
            const auto us = tok.rfind('_');
            stream.tokens.push_back(tok.substr(0, us));
            stream.tokens.push_back(tok.substr(us + 1));
        } else {
            stream.tokens.push_back(tok);
        }
    }
    return stream;
}

TokenStream encode(TokenStream stream, const Vocabulary& vocab) {
    stream.ids.clear();
    stream.oov_mask.clear();
    stream.ids.reserve(stream.tokens.size());
    stream.oov_mask.reserve(stream.tokens.size());
    for (const auto& tok : stream.tokens) {
        const bool known = vocab.contains(tok);
        stream.ids.push_back(known ? vocab.lookup(tok) : kUnkId);
        stream.oov_mask.push_back(!known);
    }
    return stream;
}

std::vector<std::string> decode(const std::vector<int>& ids, const Vocabulary& vocab) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int id : ids) {
        if (id < 0 || id >= static_cast<int>(vocab.size()))
            throw IdOutOfRange("token id " + std::to_string(id) + " outside vocabulary of " +
                               std::to_string(vocab.size()));
        out.push_back(vocab.tokens[id]);
    }
    return out;
}

std::string token_stream_to_jsonl(const TokenStream& stream) {
    nlohmann::json j;
    j["unit_id"] = stream.unit_id;
    j["tokens"] = stream.tokens;
    if (!stream.ids.empty()) j["ids"] = stream.ids;
    return j.dump();
}

TokenStream token_stream_from_jsonl(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    TokenStream stream;
    stream.unit_id = j.at("unit_id").get<std::string>();
    stream.tokens = j.at("tokens").get<std::vector<std::string>>();
    if (j.contains("ids")) stream.ids = j.at("ids").get<std::vector<int>>();
    return stream;
}

} // namespace tokompiler
