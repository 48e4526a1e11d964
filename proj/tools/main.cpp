// tokompiler: structure-aware tokenization toolkit for HPC source code.
//
// Subcommands: tokenize, restore, corpus, vocab, bpe-train, compare.
// All runs are reproducible: same inputs + flags + seed give byte-identical
// artifacts. Outputs are written atomically (temp file + rename).

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tokompiler/bpe.hpp"
#include "tokompiler/corpus.hpp"
#include "tokompiler/errors.hpp"
#include "tokompiler/eval.hpp"
#include "tokompiler/pipeline.hpp"
#include "tokompiler/vocabulary.hpp"

namespace fs = std::filesystem;
using namespace tokompiler;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t seed_from_env() {
    if (const char* env = std::getenv("TOKOMPILER_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring unparseable TOKOMPILER_SEED\n";
        }
    }
    return kDefaultSeed;
}

std::string sanitize_id(const std::string& id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out;
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Input units for tokenize/bpe-train/compare: a directory tree, a single
// source file, or a units.jsonl produced by `corpus`.
std::vector<SourceUnit> load_units(const std::string& input, const std::string& lang_override) {
    const fs::path path(input);
    if (fs::is_directory(path)) {
        std::map<std::string, std::uint64_t> ledger;
        return ingest(path, default_language_map(), ledger);
    }
    if (!fs::is_regular_file(path)) throw RootNotFound("input not found: " + input);
    if (path.extension() == ".jsonl") {
        std::vector<SourceUnit> units;
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) units.push_back(source_unit_from_jsonl(line));
        return units;
    }
    SourceUnit unit;
    unit.id = path.filename().string();
    unit.origin = path.generic_string();
    const auto& map = default_language_map();
    if (!lang_override.empty())
        unit.language = language_from_string(lang_override);
    else if (auto it = map.find(path.extension().string()); it != map.end())
        unit.language = it->second;
    else
        throw UnsupportedLanguage("cannot infer language of " + input + "; pass --lang");
    unit.text = read_file(path);
    return {unit};
}

struct CommonOpts {
    std::string input;
    std::string out_dir;
    std::string lang;
    std::uint64_t seed = seed_from_env();
    std::int64_t range_lo = 1;
    std::int64_t range_hi = 1000;
    std::string scope = "file";
    std::uint64_t min_tokens = 100;
    std::uint64_t max_bytes = 1048576;
    bool strict = false;
    unsigned jobs = 1;
};

void add_seed_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "RNG seed (overrides TOKOMPILER_SEED)");
    cmd->add_option("--range-lo", o.range_lo, "low end of the replacement id range");
    cmd->add_option("--range-hi", o.range_hi, "high end of the replacement id range");
}

int cmd_tokenize(const CommonOpts& o, const std::string& vocab_path) {
    std::vector<SourceUnit> units = load_units(o.input, o.lang);
    std::size_t failures = 0;
    if (o.scope == "function") {
        std::vector<SourceUnit> fns;
        for (const auto& unit : units) {
            try {
                const SyntaxTree tree = parse(unit);
                for (auto& fn : extract_functions(tree, unit)) fns.push_back(std::move(fn));
            } catch (const std::exception& e) {
                std::cerr << "unit " << unit.id << " failed: " << e.what() << "\n";
                ++failures;
            }
        }
        units = std::move(fns);
    }

    Vocabulary vocab;
    const bool have_vocab = !vocab_path.empty();
    if (have_vocab) vocab = load_vocabulary(vocab_path);

    PipelineConfig config;
    config.range = {o.range_lo, o.range_hi};

    struct UnitOutput {
        bool ok = false;
        std::string jsonl;
        std::string dict_json;
        std::string unit_id;
        std::string error;
    };
    std::vector<UnitOutput> outputs(units.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= units.size()) return;
            UnitOutput& out = outputs[i];
            out.unit_id = units[i].id;
            try {
                const PipelineResult r =
                    tokenize_unit(units[i], o.seed, config, have_vocab ? &vocab : nullptr);
                out.jsonl = token_stream_to_jsonl(r.stream);
                out.dict_json = dictionary_to_json(r.anonymized.dictionary);
                out.ok = true;
            } catch (const std::exception& e) {
                out.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned width = std::max(1u, o.jobs);
    for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::string tokens_body;
    std::size_t written = 0;
    for (const auto& out : outputs) {
        if (!out.ok) {
            std::cerr << "unit " << out.unit_id << " failed: " << out.error << "\n";
            ++failures;
            continue;
        }
        tokens_body += out.jsonl;
        tokens_body.push_back('\n');
        atomic_write(fs::path(o.out_dir) / "dicts" / (sanitize_id(out.unit_id) + ".json"),
                     out.dict_json);
        if (++written % 500 == 0) std::cerr << "tokenized " << written << " units\n";
    }
    atomic_write(fs::path(o.out_dir) / "tokens.jsonl", tokens_body);
    return (failures && o.strict) ? 1 : 0;
}

int cmd_restore(const std::string& tokens_path, const std::string& dicts_dir,
                const std::string& out_dir) {
    std::ifstream in(tokens_path);
    if (!in) {
        std::cerr << "cannot read " << tokens_path << "\n";
        return 2;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const TokenStream stream = token_stream_from_jsonl(line);
        const fs::path dict_path =
            fs::path(dicts_dir) / (sanitize_id(stream.unit_id) + ".json");
        if (!fs::exists(dict_path)) {
            std::cerr << "missing dictionary " << dict_path << "\n";
            return 2;
        }
        const ChangeDictionary dict = dictionary_from_json(read_file(dict_path));
        const auto lexemes = restore(stream.tokens, dict);
        std::string body;
        for (std::size_t i = 0; i < lexemes.size(); ++i) {
            if (i) body.push_back(' ');
            body += lexemes[i];
        }
        body.push_back('\n');
        atomic_write(fs::path(out_dir) / (sanitize_id(stream.unit_id) + ".txt"), body);
    }
    return 0;
}

int cmd_corpus(const CommonOpts& o, bool no_require_parse) {
    FilterConfig cfg;
    cfg.min_tokens = o.min_tokens;
    cfg.max_bytes = o.max_bytes;
    cfg.require_parse = !no_require_parse;
    const CorpusResult result = run_corpus_pipeline(o.input, cfg);
    atomic_write(fs::path(o.out_dir) / "stats.json", result.stats.to_json());
    std::string body;
    for (const auto& block : result.blocks) {
        body += source_unit_to_jsonl(block);
        body.push_back('\n');
    }
    atomic_write(fs::path(o.out_dir) / "units.jsonl", body);
    return 0;
}

int cmd_vocab(const std::string& tokens_path, const std::string& out_path, bool observed_only,
              std::int64_t number_lo, std::int64_t number_hi) {
    std::ifstream in(tokens_path);
    if (!in) {
        std::cerr << "cannot read " << tokens_path << "\n";
        return 2;
    }
    std::vector<TokenStream> streams;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) streams.push_back(token_stream_from_jsonl(line));
    VocabBuildConfig cfg;
    cfg.include_full_number_range = !observed_only;
    cfg.number_lo = number_lo;
    cfg.number_hi = number_hi;
    const Vocabulary vocab = build_vocabulary(streams, cfg);
    atomic_write(out_path, vocabulary_to_text(vocab));
    std::cerr << "vocabulary size " << vocab.size() << "\n";
    return 0;
}

int cmd_bpe_train(const CommonOpts& o, const std::string& out_path, std::size_t target_size,
                  double sample_fraction) {
    const auto units = load_units(o.input, o.lang);
    std::vector<std::string> texts;
    texts.reserve(units.size());
    for (const auto& u : units) texts.push_back(u.text);
    const BpeModel model = train_bpe(texts, target_size, sample_fraction, o.seed);
    if (!fs::path(out_path).parent_path().empty())
        fs::create_directories(fs::path(out_path).parent_path());
    const std::string tmp = out_path + ".tmp";
    save_bpe(model, tmp);
    fs::rename(tmp, out_path);
    std::cerr << "bpe model: " << model.merges.size() << " merges, vocab "
              << model.vocab_size() << "\n";
    return 0;
}

int cmd_compare(const CommonOpts& o, const std::string& vocab_path,
                const std::string& bpe_path, bool with_ppl) {
    const auto units = load_units(o.input, o.lang);
    const Vocabulary vocab = load_vocabulary(vocab_path);
    const BpeModel bpe = load_bpe(bpe_path);
    PipelineConfig config;
    config.range = {o.range_lo, o.range_hi};
    ComparisonReport report = compare_token_counts(units, o.seed, config, vocab, bpe);
    if (with_ppl) attach_perplexities(report, units, o.seed, config, vocab, bpe);
    atomic_write(fs::path(o.out_dir) / "report.json", report.to_json());
    atomic_write(fs::path(o.out_dir) / "report.txt", report.to_table());
    std::cout << report.to_table();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tokompiler: structure-aware tokenization for HPC source code"};
    app.require_subcommand(1);

    CommonOpts o;

    auto* tokenize = app.add_subcommand("tokenize", "anonymize + lexicalize units");
    std::string vocab_path;
    tokenize->add_option("--in", o.input, "input directory, file, or units.jsonl")->required();
    tokenize->add_option("--out", o.out_dir, "output directory")->required();
    tokenize->add_option("--lang", o.lang, "language override for a single file");
    tokenize->add_option("--scope", o.scope, "consistency scope: file or function")
        ->check(CLI::IsMember({"file", "function"}));
    tokenize->add_option("--vocab", vocab_path, "vocabulary file; adds integer ids");
    tokenize->add_option("--jobs", o.jobs, "worker pool width");
    tokenize->add_flag("--strict", o.strict, "exit 1 on any unit failure");
    add_seed_opts(tokenize, o);

    auto* restore_cmd = app.add_subcommand("restore", "restore originals via dictionaries");
    std::string tokens_path, dicts_dir;
    restore_cmd->add_option("--tokens", tokens_path, "tokens.jsonl")->required();
    restore_cmd->add_option("--dicts", dicts_dir, "dictionary directory")->required();
    restore_cmd->add_option("--out", o.out_dir, "output directory")->required();

    auto* corpus_cmd = app.add_subcommand("corpus", "dedup/filter/extract + stats");
    bool no_require_parse = false;
    corpus_cmd->add_option("--in", o.input, "corpus root directory")->required();
    corpus_cmd->add_option("--out", o.out_dir, "output directory")->required();
    corpus_cmd->add_option("--min-tokens", o.min_tokens, "keep units with more tokens");
    corpus_cmd->add_option("--max-bytes", o.max_bytes, "drop files at or above this size");
    corpus_cmd->add_flag("--no-require-parse", no_require_parse,
                         "admit units with parser error nodes");

    auto* vocab_cmd = app.add_subcommand("vocab", "build the closed vocabulary");
    std::string vocab_out;
    bool observed_only = false;
    vocab_cmd->add_option("--in", o.input, "tokens.jsonl")->required();
    vocab_cmd->add_option("--out", vocab_out, "vocabulary file")->required();
    vocab_cmd->add_flag("--observed-only", observed_only,
                        "skip the full number range, keep observed tokens only");
    vocab_cmd->add_option("--range-lo", o.range_lo, "number range low end");
    vocab_cmd->add_option("--range-hi", o.range_hi, "number range high end");

    auto* bpe_cmd = app.add_subcommand("bpe-train", "train the BPE baseline");
    std::string bpe_out;
    std::size_t target_size = 50000;
    double sample_fraction = 1.0;
    bpe_cmd->add_option("--in", o.input, "input directory, file, or units.jsonl")->required();
    bpe_cmd->add_option("--out", bpe_out, "model file")->required();
    bpe_cmd->add_option("--target-size", target_size, "vocabulary target size");
    bpe_cmd->add_option("--sample-fraction", sample_fraction, "training sample fraction");
    bpe_cmd->add_option("--seed", o.seed, "sampling seed");

    auto* compare_cmd = app.add_subcommand("compare", "tokompiler vs BPE report");
    std::string cmp_vocab, cmp_bpe;
    bool with_ppl = false;
    compare_cmd->add_option("--in", o.input, "input directory, file, or units.jsonl")->required();
    compare_cmd->add_option("--vocab", cmp_vocab, "vocabulary file")->required();
    compare_cmd->add_option("--bpe-model", cmp_bpe, "BPE model file")->required();
    compare_cmd->add_option("--out", o.out_dir, "output directory")->required();
    compare_cmd->add_flag("--ppl", with_ppl, "attach n-gram perplexities");
    add_seed_opts(compare_cmd, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tokenize) return cmd_tokenize(o, vocab_path);
        if (*restore_cmd) return cmd_restore(tokens_path, dicts_dir, o.out_dir);
        if (*corpus_cmd) return cmd_corpus(o, no_require_parse);
        if (*vocab_cmd) return cmd_vocab(o.input, vocab_out, observed_only, o.range_lo, o.range_hi);
        if (*bpe_cmd) return cmd_bpe_train(o, bpe_out, target_size, sample_fraction);
        if (*compare_cmd) return cmd_compare(o, cmp_vocab, cmp_bpe, with_ppl);
    } catch (const EmptyCorpus& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RootNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
