#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

#include "tokompiler/errors.hpp"
#include "tokompiler/lexicalizer.hpp"
#include "tokompiler/vocabulary.hpp"

using namespace tokompiler;

namespace {

TokenStream stream_of(std::vector<std::string> tokens) {
    TokenStream s;
    s.tokens = std::move(tokens);
    return s;
}

} // namespace

TEST_CASE("build_vocabulary places specials first and sorts the rest") {
    VocabBuildConfig cfg;
    cfg.include_full_number_range = false;
    cfg.include_category_words = false;
    const auto v = build_vocabulary({stream_of({"b", "a", "b", "c"})}, cfg);
    CHECK(v.tokens == std::vector<std::string>{kUnkToken, kPadToken, kEosToken, "a", "b", "c"});
    CHECK(v.lookup("a") == 3);
    CHECK(v.lookup("missing") == kUnkId);
}

TEST_CASE("default build covers category words and the id number range") {
    const auto v = build_vocabulary({stream_of({"int", ";"})});
    CHECK(v.contains("func"));
    CHECK(v.contains("var"));
    CHECK(v.contains("arr"));
    CHECK(v.contains("num"));
    CHECK(v.contains("str"));
    CHECK(v.contains("1"));
    CHECK(v.contains("1000"));
    CHECK(!v.contains("1001"));
    CHECK(!v.contains("0"));
    CHECK(v.size() <= 2000);
}

TEST_CASE("vocabulary is insensitive to stream order") {
    VocabBuildConfig cfg;
    const auto v1 = build_vocabulary({stream_of({"x", "y"}), stream_of({"z"})}, cfg);
    const auto v2 = build_vocabulary({stream_of({"z"}), stream_of({"y", "x"})}, cfg);
    CHECK(v1.tokens == v2.tokens);
}

TEST_CASE("build_vocabulary rejects an empty corpus") {
    CHECK_THROWS_AS(build_vocabulary({}), EmptyCorpus);
}

TEST_CASE("oov arithmetic") {
    VocabBuildConfig cfg;
    cfg.include_full_number_range = false;
    const auto v = build_vocabulary({stream_of({"a", "b"})}, cfg);

    auto r0 = oov_rate(v, {stream_of({"a", "b", "a"})});
    CHECK(r0.oov_tokens == 0);
    CHECK(r0.total_tokens == 3);
    CHECK(r0.rate() == doctest::Approx(0.0));

    std::vector<std::string> many(999, "a");
    many.push_back("never_seen");
    auto r1 = oov_rate(v, {stream_of(many)});
    CHECK(r1.oov_tokens == 1);
    CHECK(r1.total_tokens == 1000);
    CHECK(r1.rate() == doctest::Approx(0.001));
}

TEST_CASE("save and load preserve the vocabulary exactly") {
    const auto v = build_vocabulary({stream_of({"int", "main", "(", ")", "{", "}"})});
    const auto path =
        (std::filesystem::temp_directory_path() / "tok_vocab_roundtrip.txt").string();
    save_vocabulary(v, path);
    const auto back = load_vocabulary(path);
    CHECK(back.tokens == v.tokens);
    CHECK(back.provenance == Vocabulary::Provenance::Loaded);
    std::remove(path.c_str());
}

TEST_CASE("malformed vocabulary files are rejected") {
    CHECK_THROWS_AS(vocabulary_from_text("a\nb\n"), MalformedVocabFile);  // missing specials
    const std::string dup = std::string(kUnkToken) + "\n" + kPadToken + "\n" + kEosToken +
                            "\na\na\n";
    CHECK_THROWS_AS(vocabulary_from_text(dup), MalformedVocabFile);
}

TEST_CASE("text form is one token per line") {
    VocabBuildConfig cfg;
    cfg.include_full_number_range = false;
    cfg.include_category_words = false;
    const auto v = build_vocabulary({stream_of({"x"})}, cfg);
    CHECK(vocabulary_to_text(v) ==
          std::string(kUnkToken) + "\n" + kPadToken + "\n" + kEosToken + "\nx\n");
    const auto back = vocabulary_from_text(vocabulary_to_text(v));
    CHECK(back.tokens == v.tokens);
}
