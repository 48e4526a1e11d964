#include "tokompiler/bpe.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "tokompiler/errors.hpp"
#include "tokompiler/rng.hpp"

namespace tokompiler {

namespace {

enum class ByteClass { Alpha, Digit, Other };

ByteClass classify_byte(unsigned char c) {
    if (std::isalpha(c)) return ByteClass::Alpha;
    if (std::isdigit(c)) return ByteClass::Digit;
    return ByteClass::Other;
}

// Mergeable runs (letters, digits) of the text, in order.
template <typename RunFn, typename ByteFn>
void for_each_segment(std::string_view text, RunFn&& on_run, ByteFn&& on_byte) {
    std::size_t i = 0;
    while (i < text.size()) {
        const ByteClass cls = classify_byte(static_cast<unsigned char>(text[i]));
        if (cls == ByteClass::Other) {
            on_byte(text[i]);
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < text.size() && classify_byte(static_cast<unsigned char>(text[j])) == cls) ++j;
        on_run(text.substr(i, j - i));
        i = j;
    }
}

using Pair = std::pair<std::string, std::string>;

std::vector<std::string> byte_symbols(std::string_view run) {
    std::vector<std::string> out;
    out.reserve(run.size());
    for (char c : run) out.emplace_back(1, c);
    return out;
}

void apply_merge(std::vector<std::string>& symbols, const Pair& merge) {
    std::size_t w = 0;
    for (std::size_t r = 0; r < symbols.size(); ++r) {
        if (r + 1 < symbols.size() && symbols[r] == merge.first && symbols[r + 1] == merge.second) {
            symbols[w++] = merge.first + merge.second;
            ++r;
        } else {
            if (w != r) symbols[w] = std::move(symbols[r]);
            ++w;
        }
    }
    symbols.resize(w);
}

} // namespace

BpeModel train_bpe(const std::vector<std::string>& corpus, std::size_t target_size,
                   double sample_fraction, std::uint64_t seed) {
    if (corpus.empty()) throw EmptyCorpus("bpe training corpus is empty");
    if (sample_fraction <= 0.0 || sample_fraction > 1.0)
        throw std::invalid_argument("sample_fraction must be in (0, 1]");

    Rng rng(seed);
    std::vector<const std::string*> sample;
    for (const auto& text : corpus)
        if (unit_real(rng) < sample_fraction) sample.push_back(&text);
    if (sample.empty()) sample.push_back(&corpus.front());

    // word model: distinct mergeable runs with multiplicities
    std::unordered_map<std::string, std::uint64_t> word_counts;
    for (const std::string* text : sample)
        for_each_segment(
            *text, [&](std::string_view run) { ++word_counts[std::string(run)]; },
            [](char) {});

    struct Word {
        std::vector<std::string> symbols;
        std::uint64_t count;
    };
    std::vector<Word> words;
    words.reserve(word_counts.size());
    {
        // deterministic iteration order for the merge loop
        std::map<std::string, std::uint64_t> sorted(word_counts.begin(), word_counts.end());
        for (auto& [run, count] : sorted) words.push_back({byte_symbols(run), count});
    }

    BpeModel model;
    model.target_size = target_size;
    model.seed = seed;
    const std::size_t max_merges = target_size > 256 ? target_size - 256 : 0;

    while (model.merges.size() < max_merges) {
        std::map<Pair, std::uint64_t> pair_counts;
        for (const Word& w : words)
            for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i)
                pair_counts[{w.symbols[i], w.symbols[i + 1]}] += w.count;

        const Pair* best = nullptr;
        std::uint64_t best_count = 1;  // a pair must repeat to merge
        for (const auto& [pair, count] : pair_counts) {
            if (count > best_count) {  // std::map order breaks ties low
                best = &pair;
                best_count = count;
            }
        }
        if (!best) break;
        model.merges.push_back(*best);
        for (Word& w : words) apply_merge(w.symbols, *best);
    }
    return model;
}

std::vector<std::string> encode_bpe(const BpeModel& model, std::string_view text) {
    std::map<Pair, std::size_t> rank;
    for (std::size_t i = 0; i < model.merges.size(); ++i) rank.emplace(model.merges[i], i);

    std::unordered_map<std::string, std::vector<std::string>> cache;
    auto encode_run = [&](std::string_view run) -> const std::vector<std::string>& {
        auto it = cache.find(std::string(run));
        if (it != cache.end()) return it->second;
        std::vector<std::string> symbols = byte_symbols(run);
        while (symbols.size() > 1) {
            std::size_t best_rank = rank.size();
            Pair best_pair;
            for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
                auto r = rank.find({symbols[i], symbols[i + 1]});
                if (r != rank.end() && r->second < best_rank) {
                    best_rank = r->second;
                    best_pair = r->first;
                }
            }
            if (best_rank == rank.size()) break;
            apply_merge(symbols, best_pair);
        }
        return cache.emplace(std::string(run), std::move(symbols)).first->second;
    };

    std::vector<std::string> out;
    for_each_segment(
        text,
        [&](std::string_view run) {
            const auto& toks = encode_run(run);
            out.insert(out.end(), toks.begin(), toks.end());
        },
        [&](char c) { out.emplace_back(1, c); });
    return out;
}

std::size_t count_bpe_tokens(const BpeModel& model, std::string_view text) {
    return encode_bpe(model, text).size();
}

void save_bpe(const BpeModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write bpe model: " + path);
    out << "tokompiler-bpe v1\n";
    out << "target_size " << model.target_size << "\n";
    out << "seed " << model.seed << "\n";
    out << "merges " << model.merges.size() << "\n";
    for (const auto& [left, right] : model.merges) out << left << " " << right << "\n";
}

BpeModel load_bpe(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read bpe model: " + path);
    std::string line;
    std::getline(in, line);
    if (line != "tokompiler-bpe v1") throw std::runtime_error("bad bpe model header: " + path);
    BpeModel model;
    std::size_t merge_count = 0;
    std::string key;
    in >> key >> model.target_size;
    in >> key >> model.seed;
    in >> key >> merge_count;
    for (std::size_t i = 0; i < merge_count; ++i) {
        std::string left, right;
        in >> left >> right;
        model.merges.emplace_back(std::move(left), std::move(right));
    }
    if (!in) throw std::runtime_error("truncated bpe model: " + path);
    return model;
}

} // namespace tokompiler
