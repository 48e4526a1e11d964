#include "tokompiler/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tokompiler {

namespace {

nlohmann::json aggregate_json(const TokenizerAggregate& agg) {
    nlohmann::json j;
    j["name"] = agg.name;
    j["vocab_size"] = agg.vocab_size;
    j["total_tokens"] = agg.total_tokens;
    j["mean_tokens_per_unit"] = agg.mean_tokens_per_unit;
    if (agg.oov_rate) j["oov_rate"] = *agg.oov_rate;
    if (agg.ppl_per_token) j["normalized_ppl_per_token"] = *agg.ppl_per_token;
    if (agg.ppl_per_source_char) j["normalized_ppl_per_source_char"] = *agg.ppl_per_source_char;
    return j;
}

} // namespace

std::string ComparisonReport::to_json() const {
    nlohmann::json j;
    j["tokompiler"] = aggregate_json(tokompiler);
    j["bpe"] = aggregate_json(bpe);
    j["reduction_ratio"] = reduction_ratio;
    j["units"] = nlohmann::json::array();
    for (const auto& row : rows)
        j["units"].push_back({{"unit_id", row.unit_id},
                              {"tokompiler_count", row.tokompiler_count},
                              {"bpe_count", row.bpe_count}});
    return j.dump(2) + "\n";
}

std::string ComparisonReport::to_table() const {
    std::ostringstream out;
    out << std::left << std::setw(14) << "tokenizer" << std::right << std::setw(12)
        << "vocab" << std::setw(14) << "tokens" << std::setw(14) << "mean/unit"
        << std::setw(12) << "oov" << "\n";
    auto line = [&](const TokenizerAggregate& agg) {
        out << std::left << std::setw(14) << agg.name << std::right << std::setw(12)
            << agg.vocab_size << std::setw(14) << agg.total_tokens << std::setw(14)
            << std::fixed << std::setprecision(2) << agg.mean_tokens_per_unit;
        if (agg.oov_rate)
            out << std::setw(12) << std::setprecision(6) << *agg.oov_rate;
        else
            out << std::setw(12) << "-";
        out << "\n";
    };
    line(tokompiler);
    line(bpe);
    out << "reduction ratio (tokompiler/bpe): " << std::setprecision(4) << reduction_ratio
        << "\n";
    return out.str();
}

ComparisonReport compare_token_counts(const std::vector<SourceUnit>& units,
                                      std::uint64_t run_seed, const PipelineConfig& config,
                                      const Vocabulary& vocab, const BpeModel& bpe_model) {
    ComparisonReport report;
    report.tokompiler.name = "tokompiler";
    report.bpe.name = "bpe";
    report.tokompiler.vocab_size = vocab.size();
    report.bpe.vocab_size = bpe_model.vocab_size();

    std::uint64_t oov = 0;
    std::uint64_t total = 0;
    for (const auto& unit : units) {
        const PipelineResult r = tokenize_unit(unit, run_seed, config, &vocab);
        UnitRow row;
        row.unit_id = unit.id;
        row.tokompiler_count = r.stream.tokens.size();
        row.bpe_count = count_bpe_tokens(bpe_model, unit.text);
        report.tokompiler.total_tokens += row.tokompiler_count;
        report.bpe.total_tokens += row.bpe_count;
        for (bool is_oov : r.stream.oov_mask) oov += is_oov ? 1 : 0;
        total += r.stream.tokens.size();
        report.rows.push_back(std::move(row));
    }
    if (!units.empty()) {
        report.tokompiler.mean_tokens_per_unit =
            static_cast<double>(report.tokompiler.total_tokens) / units.size();
        report.bpe.mean_tokens_per_unit =
            static_cast<double>(report.bpe.total_tokens) / units.size();
    }
    if (total) report.tokompiler.oov_rate = static_cast<double>(oov) / total;
    if (report.bpe.total_tokens)
        report.reduction_ratio = static_cast<double>(report.tokompiler.total_tokens) /
                                 static_cast<double>(report.bpe.total_tokens);
    return report;
}

void attach_perplexities(ComparisonReport& report, const std::vector<SourceUnit>& units,
                         std::uint64_t run_seed, const PipelineConfig& config,
                         const Vocabulary& vocab, const BpeModel& bpe_model,
                         const PerplexityOptions& options) {
    (void)vocab;
    const std::size_t train_n =
        std::max<std::size_t>(1, static_cast<std::size_t>(units.size() * options.train_fraction));
    if (train_n >= units.size()) return;  // nothing held out

    std::vector<TokenStream> tok_train, bpe_train;
    std::vector<EvalUnit> tok_eval, bpe_eval;
    for (std::size_t i = 0; i < units.size(); ++i) {
        const SourceUnit& unit = units[i];
        TokenStream tok = tokenize_unit(unit, run_seed, config).stream;
        TokenStream bpe;
        bpe.unit_id = unit.id;
        bpe.tokens = encode_bpe(bpe_model, unit.text);
        if (i < train_n) {
            tok_train.push_back(std::move(tok));
            bpe_train.push_back(std::move(bpe));
        } else {
            const auto chars = static_cast<std::uint64_t>(unit.text.size());
            tok_eval.push_back({std::move(tok), chars});
            bpe_eval.push_back({std::move(bpe), chars});
        }
    }
    const NgramModel tok_model = train_ngram(tok_train, options.order, options.add_k);
    const NgramModel bpe_model_ngram = train_ngram(bpe_train, options.order, options.add_k);
    report.tokompiler.ppl_per_token =
        normalized_perplexity(tok_model, tok_eval, Normalizer::PerToken);
    report.tokompiler.ppl_per_source_char =
        normalized_perplexity(tok_model, tok_eval, Normalizer::PerSourceChar);
    report.bpe.ppl_per_token =
        normalized_perplexity(bpe_model_ngram, bpe_eval, Normalizer::PerToken);
    report.bpe.ppl_per_source_char =
        normalized_perplexity(bpe_model_ngram, bpe_eval, Normalizer::PerSourceChar);
}

} // namespace tokompiler
