#include "tokompiler/anonymizer.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "tokompiler/errors.hpp"
#include "tokompiler/rng.hpp"

namespace tokompiler {

namespace {

const std::array<Category, kCategoryCount> kCategoryOrder = {
    Category::Func, Category::Var, Category::Arr, Category::Num, Category::Str};

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bool is_category_word(std::string_view s) {
    return s == "func" || s == "var" || s == "arr" || s == "num" || s == "str";
}

} // namespace

bool is_replacement_token(const std::string& token) {
    const auto us = token.find('_');
    if (us == std::string::npos) return false;
    return is_category_word(std::string_view(token).substr(0, us)) &&
           all_digits(std::string_view(token).substr(us + 1));
}

std::optional<std::string> ChangeDictionary::original_of(const std::string& replacement) const {
    for (const auto& e : entries)
        if (e.replacement == replacement) return e.original;
    return std::nullopt;
}

std::optional<std::string> ChangeDictionary::replacement_of(const std::string& original) const {
    for (const auto& e : entries)
        if (e.original == original) return e.replacement;
    return std::nullopt;
}

IdAssignment assign_ids(const std::array<std::size_t, kCategoryCount>& counts,
                        std::uint64_t seed, IdRange range) {
    if (range.lo > range.hi) throw EmptyRange("empty id range");
    Rng rng(seed);
    IdAssignment out;
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
        const std::size_t count = counts[c];
        if (count == 0) continue;
        IdRange r = range;
        while (static_cast<std::uint64_t>(r.hi - r.lo) + 1 < count) {
            r.hi = r.lo + (r.hi - r.lo + 1) * 10 - 1;
            out.warnings.push_back("id range widened to [" + std::to_string(r.lo) + "," +
                                   std::to_string(r.hi) + "] for category " +
                                   to_string(kCategoryOrder[c]));
        }
        out.ids[c] = sample_without_replacement(rng, r.lo, r.hi, count);
    }
    return out;
}

AnonymizedUnit anonymize(const SourceUnit& unit, const SyntaxTree& tree,
                         const std::vector<IdentifierOccurrence>& occurrences,
                         std::uint64_t seed, const AnonymizeConfig& config) {
    (void)tree;
    for (std::size_t i = 1; i < occurrences.size(); ++i) {
        if (occurrences[i].begin < occurrences[i - 1].end)
            throw OverlappingSpans("occurrence spans overlap in unit " + unit.id);
    }

    // distinct originals per category, first-occurrence order
    std::array<std::vector<const IdentifierOccurrence*>, kCategoryCount> distinct;
    std::unordered_map<std::string, std::size_t> seen;  // lexeme -> category index
    for (const auto& occ : occurrences) {
        const auto c = static_cast<std::size_t>(occ.category);
        if (seen.emplace(occ.lexeme, c).second) distinct[c].push_back(&occ);
    }

    std::array<std::size_t, kCategoryCount> counts{};
    for (std::size_t c = 0; c < kCategoryCount; ++c) counts[c] = distinct[c].size();
    IdAssignment assignment = assign_ids(counts, seed, config.range);

    AnonymizedUnit out;
    out.unit_id = unit.id;
    out.warnings = std::move(assignment.warnings);
    out.dictionary.unit_id = unit.id;
    out.dictionary.seed = seed;

    std::unordered_map<std::string, std::string> replacement_of;
    for (Category cat : kCategoryOrder) {
        const auto c = static_cast<std::size_t>(cat);
        out.category_counts[cat] = distinct[c].size();
        for (std::size_t i = 0; i < distinct[c].size(); ++i) {
            const std::string repl =
                to_string(cat) + "_" + std::to_string(assignment.ids[c][i]);
            const std::string& orig = distinct[c][i]->lexeme;
            replacement_of[orig] = repl;
            out.dictionary.entries.push_back({repl, orig, cat});
        }
    }

    // span substitution; all non-occurrence bytes kept as-is
    std::string text;
    text.reserve(unit.text.size());
    std::size_t cursor = 0;
    for (const auto& occ : occurrences) {
        text.append(unit.text, cursor, occ.begin - cursor);
        text.append(replacement_of.at(occ.lexeme));
        cursor = occ.end;
    }
    text.append(unit.text, cursor, unit.text.size() - cursor);
    out.text = std::move(text);
    return out;
}

namespace {

std::unordered_map<std::string, std::string> reverse_map(const ChangeDictionary& dict) {
    std::unordered_map<std::string, std::string> m;
    for (const auto& e : dict.entries) m[e.replacement] = e.original;
    return m;
}

} // namespace

std::vector<std::string> restore(const std::vector<std::string>& tokens,
                                 const ChangeDictionary& dict) {
    const auto originals = reverse_map(dict);
    std::vector<std::string> out;
    out.reserve(tokens.size());
    auto lookup = [&](const std::string& repl) -> const std::string& {
        auto it = originals.find(repl);
        if (it == originals.end())
            throw UnknownReplacementToken("no dictionary entry for " + repl + " in unit " +
                                          dict.unit_id);
        return it->second;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        if (is_category_word(tok) && i + 1 < tokens.size() && all_digits(tokens[i + 1])) {
            out.push_back(lookup(tok + "_" + tokens[i + 1]));
            ++i;
        } else if (is_replacement_token(tok)) {
            out.push_back(lookup(tok));
        } else {
            out.push_back(tok);
        }
    }
    return out;
}

std::string restore(const std::string& text, const ChangeDictionary& dict) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    const auto restored = restore(tokens, dict);
    std::string out;
    for (std::size_t i = 0; i < restored.size(); ++i) {
        if (i) out.push_back(' ');
        out += restored[i];
    }
    return out;
}

std::string dictionary_to_json(const ChangeDictionary& dict) {
    nlohmann::json j;
    j["unit_id"] = dict.unit_id;
    j["seed"] = dict.seed;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : dict.entries) {
        j["entries"].push_back({{"replacement", e.replacement},
                                {"original", e.original},
                                {"category", to_string(e.category)}});
    }
    return j.dump(2) + "\n";
}

ChangeDictionary dictionary_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    ChangeDictionary dict;
    dict.unit_id = j.at("unit_id").get<std::string>();
    dict.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("entries")) {
        dict.entries.push_back({e.at("replacement").get<std::string>(),
                                e.at("original").get<std::string>(),
                                category_from_string(e.at("category").get<std::string>())});
    }
    return dict;
}

} // namespace tokompiler
