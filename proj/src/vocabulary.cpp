#include "tokompiler/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tokompiler/errors.hpp"
#include "tokompiler/lexicalizer.hpp"

namespace tokompiler {

Vocabulary build_vocabulary(const std::vector<TokenStream>& corpus_streams,
                            const VocabBuildConfig& config) {
    if (corpus_streams.empty()) throw EmptyCorpus("vocabulary build over empty corpus");
    std::set<std::string> observed;
    for (const auto& stream : corpus_streams)
        observed.insert(stream.tokens.begin(), stream.tokens.end());
    if (config.include_category_words)
        for (const char* c : {"func", "var", "arr", "num", "str"}) observed.insert(c);
    if (config.include_full_number_range)
        for (std::int64_t n = config.number_lo; n <= config.number_hi; ++n)
            observed.insert(std::to_string(n));
    observed.erase(kUnkToken);
    observed.erase(kPadToken);
    observed.erase(kEosToken);

    Vocabulary vocab;
    vocab.provenance = Vocabulary::Provenance::Built;
    vocab.tokens = {kUnkToken, kPadToken, kEosToken};
    vocab.tokens.insert(vocab.tokens.end(), observed.begin(), observed.end());
    for (std::size_t i = 0; i < vocab.tokens.size(); ++i)
        vocab.id_of.emplace(vocab.tokens[i], static_cast<int>(i));
    return vocab;
}

OovReport oov_rate(const Vocabulary& vocab, const std::vector<TokenStream>& held_out) {
    if (held_out.empty()) throw EmptyCorpus("oov rate over empty corpus");
    OovReport report;
    for (const auto& stream : held_out) {
        for (const auto& tok : stream.tokens) {
            ++report.total_tokens;
            if (!vocab.contains(tok)) ++report.oov_tokens;
        }
    }
    return report;
}

std::string vocabulary_to_text(const Vocabulary& vocab) {
    std::string out;
    for (const auto& tok : vocab.tokens) {
        out += tok;
        out.push_back('\n');
    }
    return out;
}

Vocabulary vocabulary_from_text(const std::string& body) {
    Vocabulary vocab;
    vocab.provenance = Vocabulary::Provenance::Loaded;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        if (!vocab.id_of.emplace(line, static_cast<int>(vocab.tokens.size())).second)
            throw MalformedVocabFile("duplicate token: " + line);
        vocab.tokens.push_back(line);
    }
    if (vocab.tokens.size() < 3 || vocab.tokens[0] != kUnkToken || vocab.tokens[1] != kPadToken ||
        vocab.tokens[2] != kEosToken)
        throw MalformedVocabFile("vocab file must start with the three special tokens");
    return vocab;
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write vocab file: " + path);
    out << vocabulary_to_text(vocab);
}

Vocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedVocabFile("cannot read vocab file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return vocabulary_from_text(buf.str());
}

} // namespace tokompiler
