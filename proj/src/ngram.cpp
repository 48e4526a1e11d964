#include "tokompiler/ngram.hpp"

#include <cmath>

#include "tokompiler/errors.hpp"

namespace tokompiler {

namespace {

constexpr char kBos[] = "<s>";
constexpr char kCtxSep = '\x1f';

std::string join_context(const std::vector<std::string>& context) {
    std::string key;
    for (const auto& t : context) {
        key += t;
        key.push_back(kCtxSep);
    }
    return key;
}

std::vector<std::string> padded(const TokenStream& stream, int order) {
    std::vector<std::string> toks(static_cast<std::size_t>(order - 1), kBos);
    toks.insert(toks.end(), stream.tokens.begin(), stream.tokens.end());
    return toks;
}

} // namespace

double NgramModel::log_prob(const std::vector<std::string>& context,
                            const std::string& token) const {
    const std::string key = join_context(context);
    std::uint64_t total = 0;
    std::uint64_t count = 0;
    if (auto it = context_totals.find(key); it != context_totals.end()) {
        total = it->second;
        const auto& next = counts.at(key);
        if (auto jt = next.find(token); jt != next.end()) count = jt->second;
    }
    const double v = static_cast<double>(event_space());
    return std::log((static_cast<double>(count) + add_k) /
                    (static_cast<double>(total) + add_k * v));
}

NgramModel train_ngram(const std::vector<TokenStream>& streams, int order, double add_k) {
    if (order < 1) throw std::invalid_argument("ngram order must be >= 1");
    if (add_k <= 0.0) throw std::invalid_argument("add_k must be positive");
    if (streams.empty()) throw EmptyCorpus("ngram training corpus is empty");

    NgramModel model;
    model.order = order;
    model.add_k = add_k;
    for (const auto& stream : streams) {
        const auto toks = padded(stream, order);
        for (std::size_t i = static_cast<std::size_t>(order - 1); i < toks.size(); ++i) {
            std::vector<std::string> ctx(toks.begin() + (i - (order - 1)), toks.begin() + i);
            const std::string key = join_context(ctx);
            ++model.counts[key][toks[i]];
            ++model.context_totals[key];
            model.vocab.insert(toks[i]);
        }
    }
    return model;
}

double normalized_perplexity(const NgramModel& model, const std::vector<EvalUnit>& held_out,
                             Normalizer normalizer) {
    if (held_out.empty()) throw EmptyCorpus("perplexity over empty corpus");
    double nll = 0.0;
    std::uint64_t token_count = 0;
    std::uint64_t char_count = 0;
    for (const auto& unit : held_out) {
        const auto toks = padded(unit.stream, model.order);
        for (std::size_t i = static_cast<std::size_t>(model.order - 1); i < toks.size(); ++i) {
            std::vector<std::string> ctx(toks.begin() + (i - (model.order - 1)),
                                         toks.begin() + i);
            nll -= model.log_prob(ctx, toks[i]);
            ++token_count;
        }
        char_count += unit.source_chars;
    }
    const std::uint64_t denom = normalizer == Normalizer::PerToken ? token_count : char_count;
    if (denom == 0) throw ZeroNormalizer("perplexity normalizer is zero");
    return std::exp(nll / static_cast<double>(denom));
}

} // namespace tokompiler
