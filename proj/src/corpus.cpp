#include "tokompiler/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "tokompiler/errors.hpp"
#include "tokompiler/parser.hpp"
#include "tokompiler/pipeline.hpp"
#include "tokompiler/rng.hpp"

namespace fs = std::filesystem;

namespace tokompiler {

const LanguageMap& default_language_map() {
    static const LanguageMap map = {
        {".c", Language::C},       {".h", Language::C},
        {".cc", Language::Cpp},    {".cpp", Language::Cpp},
        {".cxx", Language::Cpp},   {".hpp", Language::Cpp},
        {".hh", Language::Cpp},
        {".f", Language::Fortran}, {".f77", Language::Fortran},
        {".f90", Language::Fortran}, {".f95", Language::Fortran},
        {".f03", Language::Fortran}, {".f08", Language::Fortran},
        {".F", Language::Fortran}, {".F90", Language::Fortran},
    };
    return map;
}

namespace {

// UTF-8 validation with lossy replacement of invalid sequences.
std::string decode_lossy(const std::string& bytes) {
    static const std::string replacement = "\xEF\xBF\xBD";  // U+FFFD
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        const auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        if (c < 0x80)
            len = 1;
        else if ((c & 0xE0) == 0xC0)
            len = 2;
        else if ((c & 0xF0) == 0xE0)
            len = 3;
        else if ((c & 0xF8) == 0xF0)
            len = 4;
        if (len == 0 || i + len > bytes.size()) {
            out += replacement;
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t j = 1; j < len; ++j)
            if ((static_cast<unsigned char>(bytes[i + j]) & 0xC0) != 0x80) ok = false;
        if (!ok) {
            out += replacement;
            ++i;
            continue;
        }
        out.append(bytes, i, len);
        i += len;
    }
    return out;
}

std::string normalized_for_hash(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_ws = true;  // also trims leading whitespace
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_ws) out.push_back(' ');
            in_ws = true;
        } else {
            out.push_back(c);
            in_ws = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string repo_of(const std::string& origin) {
    const auto slash = origin.find('/');
    return slash == std::string::npos ? origin : origin.substr(0, slash);
}

} // namespace

std::vector<SourceUnit> ingest(const fs::path& root, const LanguageMap& language_map,
                               std::map<std::string, std::uint64_t>& ledger) {
    if (!fs::exists(root) || !fs::is_directory(root))
        throw RootNotFound("corpus root not found: " + root.string());

    std::vector<fs::path> paths;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (language_map.count(entry.path().extension().string()))
            paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());

    std::vector<SourceUnit> units;
    units.reserve(paths.size());
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            ++ledger["unreadable"];
            continue;
        }
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (bytes.find('\0') != std::string::npos) {
            ++ledger["undecodable"];
            continue;
        }
        SourceUnit unit;
        unit.origin = fs::relative(path, root).generic_string();
        unit.id = unit.origin;
        unit.language = language_map.at(path.extension().string());
        unit.text = decode_lossy(bytes);
        if (unit.text.empty()) {
            ++ledger["empty"];
            continue;
        }
        units.push_back(std::move(unit));
    }
    return units;
}

std::vector<SourceUnit> deduplicate(const std::vector<SourceUnit>& units,
                                    std::map<std::string, std::uint64_t>& ledger) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<SourceUnit> kept;
    kept.reserve(units.size());
    for (const auto& unit : units) {
        const std::uint64_t h = fnv1a64(normalized_for_hash(unit.text));
        if (seen.insert(h).second)
            kept.push_back(unit);
        else
            ++ledger["duplicate"];
    }
    return kept;
}

FilterDecision filter_unit(const SourceUnit& unit, const FilterConfig& cfg) {
    if (unit.text.size() >= cfg.max_bytes) return {false, "size"};
    SyntaxTree tree;
    try {
        tree = parse(unit);
    } catch (const std::exception&) {
        return {false, "parse_error"};
    }
    if (cfg.require_parse && tree.error_count > 0) return {false, "parse_error"};
    if (tokompiler_token_count(tree, unit) <= cfg.min_tokens) return {false, "min_tokens"};
    return {true, ""};
}

CorpusResult run_corpus_pipeline(const fs::path& root, const FilterConfig& cfg,
                                 const LanguageMap& language_map) {
    CorpusResult result;
    auto& ledger = result.stats.filter_ledger;

    const auto ingested = ingest(root, language_map, ledger);
    result.stats.files_seen = ingested.size();
    const auto deduped = deduplicate(ingested, ledger);

    for (const auto& unit : deduped) {
        const FilterDecision d = filter_unit(unit, cfg);
        if (!d.keep) {
            ++ledger[d.reason];
            continue;
        }
        result.kept_files.push_back(unit);
        auto& lang_stats = result.stats.per_language[to_string(unit.language)];
        ++lang_stats.files;
        lang_stats.size_bytes += unit.text.size();

        const SyntaxTree tree = parse(unit);
        for (auto& fn : extract_functions(tree, unit)) {
            const SyntaxTree fn_tree = parse(fn);
            if (tokompiler_token_count(fn_tree, fn) <= cfg.min_tokens) {
                ++ledger["block_min_tokens"];
                continue;
            }
            ++lang_stats.functions;
            result.blocks.push_back(std::move(fn));
        }
    }
    result.stats.files_kept = result.kept_files.size();

    // distinct repositories (top-level directory) contributing kept files
    std::map<std::string, std::unordered_set<std::string>> repos;
    for (const auto& unit : result.kept_files)
        repos[to_string(unit.language)].insert(repo_of(unit.origin));
    for (auto& [lang, set] : repos) result.stats.per_language[lang].repos = set.size();
    return result;
}

std::string CorpusStats::to_json() const {
    nlohmann::json j;
    for (const auto& [lang, s] : per_language)
        j["languages"][lang] = {{"repos", s.repos},
                                {"size_bytes", s.size_bytes},
                                {"files", s.files},
                                {"functions", s.functions}};
    if (per_language.empty()) j["languages"] = nlohmann::json::object();
    j["filter_ledger"] = filter_ledger;
    j["files_seen"] = files_seen;
    j["files_kept"] = files_kept;
    return j.dump(2) + "\n";
}

std::string source_unit_to_jsonl(const SourceUnit& unit) {
    nlohmann::json j;
    j["id"] = unit.id;
    j["language"] = to_string(unit.language);
    j["origin"] = unit.origin;
    j["text"] = unit.text;
    return j.dump();
}

SourceUnit source_unit_from_jsonl(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    SourceUnit unit;
    unit.id = j.at("id").get<std::string>();
    unit.language = language_from_string(j.at("language").get<std::string>());
    unit.origin = j.at("origin").get<std::string>();
    unit.text = j.at("text").get<std::string>();
    return unit;
}

} // namespace tokompiler
