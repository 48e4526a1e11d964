#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include <nlohmann/json.hpp>

#include "corpus_gen.hpp"
#include "tokompiler/corpus.hpp"
#include "tokompiler/errors.hpp"

using namespace tokompiler;
namespace fs = std::filesystem;

namespace {

struct TempTree {
    fs::path root;
    explicit TempTree(const std::string& tag) {
        root = fs::temp_directory_path() / ("tok_corpus_" + tag);
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~TempTree() { fs::remove_all(root); }
    void file(const std::string& rel, const std::string& body) const {
        const fs::path p = root / rel;
        fs::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << body;
    }
};

SourceUnit unit_of(std::string text, std::string id = "u") {
    SourceUnit u;
    u.id = std::move(id);
    u.origin = u.id;
    u.language = Language::C;
    u.text = std::move(text);
    return u;
}

} // namespace

TEST_CASE("ingest walks the tree in path order and skips junk") {
    TempTree t("ingest");
    t.file("repo_a/b.c", "int x;\n");
    t.file("repo_a/a.c", "int y;\n");
    t.file("repo_b/c.f90", "integer :: z\n");
    t.file("repo_b/notes.txt", "not source\n");
    t.file("repo_b/binary.c", std::string("\x00\x01", 2));
    t.file("repo_b/empty.c", "");

    std::map<std::string, std::uint64_t> ledger;
    const auto units = ingest(t.root, default_language_map(), ledger);
    REQUIRE(units.size() == 3);
    CHECK(units[0].origin == "repo_a/a.c");
    CHECK(units[1].origin == "repo_a/b.c");
    CHECK(units[2].origin == "repo_b/c.f90");
    CHECK(units[2].language == Language::Fortran);
    CHECK(ledger["undecodable"] == 1);
    CHECK(ledger["empty"] == 1);
}

TEST_CASE("ingest rejects a missing root") {
    std::map<std::string, std::uint64_t> ledger;
    CHECK_THROWS_AS(ingest(fs::temp_directory_path() / "tok_no_such_dir_xyz",
                           default_language_map(), ledger),
                    RootNotFound);
}

TEST_CASE("deduplicate ignores whitespace-only differences") {
    const auto a = unit_of("int f ( ) { return 1; }\n", "a.c");
    const auto b = unit_of("int f ( ) { return 1; }\n\n\n", "b.c");       // trailing blanks
    const auto c = unit_of("int  f ( )   { return 1; }\r\n", "c.c");      // spacing
    const auto d = unit_of("int f ( ) { return 2; }\n", "d.c");           // different content

    std::map<std::string, std::uint64_t> ledger;
    const auto kept = deduplicate({a, b, c, d}, ledger);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].id == "a.c");  // first occurrence wins
    CHECK(kept[1].id == "d.c");
    CHECK(ledger["duplicate"] == 2);

    std::map<std::string, std::uint64_t> ledger2;
    const auto again = deduplicate(kept, ledger2);
    CHECK(again.size() == kept.size());
    CHECK(ledger2["duplicate"] == 0);
}

TEST_CASE("filter_unit reports a reason per drop, checked in order") {
    FilterConfig cfg;
    cfg.min_tokens = 10;
    cfg.max_bytes = 64;

    CHECK(filter_unit(unit_of("int f(void) { return 1 + 2 + 3 + 4; }\n"), cfg).keep);

    auto big = unit_of(std::string(100, 'x'));
    CHECK(filter_unit(big, cfg).reason == "size");

    auto tiny = unit_of("int x;\n");
    CHECK(filter_unit(tiny, cfg).reason == "min_tokens");

    FilterConfig small_cfg = cfg;
    small_cfg.min_tokens = 1;
    auto broken = unit_of("int f( {\n");
    CHECK(filter_unit(broken, small_cfg).reason == "parse_error");
}

TEST_CASE("the short array-sum example is dropped by the token threshold") {
    FilterConfig cfg;  // default min_tokens = 100
    const auto d = filter_unit(unit_of("int func() {\n  int arr[2800 + 1];\n}\n"), cfg);
    CHECK(!d.keep);
    CHECK(d.reason == "min_tokens");
}

TEST_CASE("pipeline ledger conserves file counts and fills stats") {
    TempTree t("pipe");
    testgen::GenOptions small;
    small.files_per_lang = 4;
    testgen::write_corpus_tree(t.root, small);
    t.file("repo_c/dup_of_000.c", [] {
        testgen::GenOptions g;
        g.files_per_lang = 4;
        return testgen::generate_corpus(g)[0].text;
    }());
    t.file("repo_c/short.c", "int one(void) { return 1; }\n");

    FilterConfig cfg;
    const auto result = run_corpus_pipeline(t.root, cfg);
    const auto& s = result.stats;

    CHECK(s.files_seen == 14);
    std::uint64_t dropped = 0;
    for (const auto& [reason, n] : s.filter_ledger)
        if (reason != "block_min_tokens") dropped += n;
    CHECK(s.files_seen == s.files_kept + dropped);
    CHECK(s.filter_ledger.at("duplicate") == 1);
    CHECK(s.filter_ledger.at("min_tokens") >= 1);

    CHECK(s.per_language.at("c").files >= 3);
    CHECK(s.per_language.at("c").repos == 1);
    CHECK(s.per_language.at("fortran").functions > 0);
    CHECK(!result.blocks.empty());
    for (const auto& b : result.blocks) CHECK(!b.text.empty());
}

TEST_CASE("pipeline output is deterministic") {
    TempTree t("det");
    testgen::GenOptions small;
    small.files_per_lang = 2;
    testgen::write_corpus_tree(t.root, small);

    const auto r1 = run_corpus_pipeline(t.root, FilterConfig{});
    const auto r2 = run_corpus_pipeline(t.root, FilterConfig{});
    CHECK(r1.stats.to_json() == r2.stats.to_json());
    REQUIRE(r1.blocks.size() == r2.blocks.size());
    for (std::size_t i = 0; i < r1.blocks.size(); ++i) {
        CHECK(r1.blocks[i].id == r2.blocks[i].id);
        CHECK(r1.blocks[i].text == r2.blocks[i].text);
    }
}

TEST_CASE("stats serialize to the expected json shape") {
    TempTree t("stats");
    t.file("repo/x.c",
           "int f(int n) { int s = 0; for (int i = 0; i < n; i++) s += i; return s; }\n");
    FilterConfig cfg;
    cfg.min_tokens = 5;
    const auto result = run_corpus_pipeline(t.root, cfg);
    const auto j = nlohmann::json::parse(result.stats.to_json());
    REQUIRE(j.contains("languages"));
    REQUIRE(j["languages"].contains("c"));
    for (const char* k : {"repos", "size_bytes", "files", "functions"})
        CHECK(j["languages"]["c"].contains(k));
    CHECK(j["files_seen"].get<std::uint64_t>() == 1);
    CHECK(j["files_kept"].get<std::uint64_t>() == 1);
    CHECK(j.contains("filter_ledger"));
}

TEST_CASE("source unit jsonl round-trips") {
    auto u = unit_of("real :: x\nx = 1.0\n", "k.f90");
    u.language = Language::Fortran;
    u.origin = "repo/k.f90";
    const auto line = source_unit_to_jsonl(u);
    const auto back = source_unit_from_jsonl(line);
    CHECK(back.id == u.id);
    CHECK(back.origin == u.origin);
    CHECK(back.language == u.language);
    CHECK(back.text == u.text);
}
