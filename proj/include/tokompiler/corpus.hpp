#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tokompiler/source_unit.hpp"

namespace tokompiler {

struct FilterConfig {
    std::uint64_t min_tokens = 100;           // lexical tokens, strictly greater than
    std::uint64_t max_bytes = 1048576;        // strictly less than
    bool require_parse = true;
};

struct LanguageStats {
    std::uint64_t repos = 0;
    std::uint64_t size_bytes = 0;
    std::uint64_t files = 0;
    std::uint64_t functions = 0;
};

struct CorpusStats {
    std::map<std::string, LanguageStats> per_language;
    std::map<std::string, std::uint64_t> filter_ledger;  // drop reason -> count
    std::uint64_t files_seen = 0;
    std::uint64_t files_kept = 0;

    std::string to_json() const;
};

using LanguageMap = std::map<std::string, Language>;  // extension -> language
const LanguageMap& default_language_map();

/// One unit per matching file under root, in path-sorted order. Files that
/// cannot be read or contain NUL bytes are skipped with a ledger entry.
std::vector<SourceUnit> ingest(const std::filesystem::path& root,
                               const LanguageMap& language_map,
                               std::map<std::string, std::uint64_t>& ledger);

/// Keeps the first unit (in input order) per whitespace-normalized content
/// hash.
std::vector<SourceUnit> deduplicate(const std::vector<SourceUnit>& units,
                                    std::map<std::string, std::uint64_t>& ledger);

struct FilterDecision {
    bool keep = true;
    std::string reason;  // set when dropped
};

FilterDecision filter_unit(const SourceUnit& unit, const FilterConfig& cfg);

struct CorpusResult {
    std::vector<SourceUnit> kept_files;
    std::vector<SourceUnit> blocks;  // function-level units after re-filtering
    CorpusStats stats;
};

/// ingest -> deduplicate -> filter -> extract function blocks -> stats.
CorpusResult run_corpus_pipeline(const std::filesystem::path& root, const FilterConfig& cfg,
                                 const LanguageMap& language_map = default_language_map());

std::string source_unit_to_jsonl(const SourceUnit& unit);
SourceUnit source_unit_from_jsonl(const std::string& line);

} // namespace tokompiler
