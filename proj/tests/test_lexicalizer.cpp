#include <string>
#include <vector>

#include "doctest.h"

#include "tokompiler/errors.hpp"
#include "tokompiler/lexicalizer.hpp"
#include "tokompiler/pipeline.hpp"

using namespace tokompiler;

namespace {

SourceUnit unit_of(std::string text, Language lang, std::string id = "u") {
    SourceUnit u;
    u.id = std::move(id);
    u.language = lang;
    u.text = std::move(text);
    return u;
}

} // namespace

TEST_CASE("regenerate flattens to one comment-free line") {
    const auto u = unit_of(
        "/* banner */\nint f(int n)\n{\n  // add\n  return n + 1;\n}\n", Language::C);
    PipelineConfig cfg;
    cfg.derive_per_unit_seed = false;
    const auto r = tokenize_unit(u, 42, cfg);
    CHECK(r.normalized.find('\n') == std::string::npos);
    CHECK(r.normalized.find("banner") == std::string::npos);
    CHECK(r.normalized.find("add") == std::string::npos);
    CHECK(r.normalized.find("  ") == std::string::npos);
    CHECK(r.normalized.find("return") != std::string::npos);
}

TEST_CASE("regenerate strips fortran comments and continuations") {
    const auto u = unit_of(
        "! banner\nsubroutine s(x)\n  real :: x  ! inline note\n  x = 1.0 + &\n      2.0\n"
        "end subroutine s\n",
        Language::Fortran);
    PipelineConfig cfg;
    cfg.derive_per_unit_seed = false;
    const auto r = tokenize_unit(u, 42, cfg);
    CHECK(r.normalized.find('\n') == std::string::npos);
    CHECK(r.normalized.find("banner") == std::string::npos);
    CHECK(r.normalized.find("note") == std::string::npos);
    CHECK(r.normalized.find("+ & ") != std::string::npos);
}

TEST_CASE("lexicalize splits replacement tokens and nothing else") {
    const auto s = lexicalize("int func_252 ( ) { int arr_88 [ num_34 + num_842 ] ; }", "fig");
    const std::vector<std::string> want{"int", "func", "252", "(", ")", "{", "int",
                                        "arr", "88",  "[",  "num", "34", "+", "num",
                                        "842", "]",   ";",  "}"};
    CHECK(s.tokens == want);
    CHECK(s.unit_id == "fig");

    const auto plain = lexicalize("my_helper ( x_1 )");
    CHECK(plain.tokens == std::vector<std::string>{"my_helper", "(", "x_1", ")"});
}

TEST_CASE("encode marks out-of-vocabulary tokens as unk") {
    TokenStream train;
    train.tokens = {"int", "var", "7", ";"};
    const auto vocab = build_vocabulary({train});
    TokenStream held;
    held.tokens = {"int", "zzz_unknown", ";"};
    const auto enc = encode(held, vocab);
    REQUIRE(enc.ids.size() == 3);
    CHECK(enc.ids[0] != kUnkId);
    CHECK(enc.ids[1] == kUnkId);
    CHECK(enc.oov_mask == std::vector<bool>{false, true, false});
    CHECK(decode(enc.ids, vocab) ==
          std::vector<std::string>{"int", kUnkToken, ";"});
}

TEST_CASE("decode rejects ids outside the vocabulary") {
    TokenStream train;
    train.tokens = {"a"};
    VocabBuildConfig cfg;
    cfg.include_full_number_range = false;
    const auto vocab = build_vocabulary({train}, cfg);
    CHECK_THROWS_AS(decode({static_cast<int>(vocab.size())}, vocab), IdOutOfRange);
    CHECK_THROWS_AS(decode({-1}, vocab), IdOutOfRange);
}

TEST_CASE("token stream jsonl round-trips") {
    TokenStream s;
    s.unit_id = "a/b.c#0";
    s.tokens = {"int", "var", "3", ";"};
    s.ids = {4, 9, 2, 1};
    const auto line = token_stream_to_jsonl(s);
    CHECK(line.find('\n') == std::string::npos);  // caller appends the newline
    const auto back = token_stream_from_jsonl(line);
    CHECK(back.unit_id == s.unit_id);
    CHECK(back.tokens == s.tokens);
    CHECK(back.ids == s.ids);
}
