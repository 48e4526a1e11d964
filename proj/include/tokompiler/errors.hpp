#pragma once

#include <stdexcept>
#include <string>

namespace tokompiler {

struct UnsupportedLanguage : std::runtime_error {
    explicit UnsupportedLanguage(const std::string& what) : std::runtime_error(what) {}
};

struct CatastrophicParseFailure : std::runtime_error {
    explicit CatastrophicParseFailure(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyRange : std::runtime_error {
    explicit EmptyRange(const std::string& what) : std::runtime_error(what) {}
};

struct OverlappingSpans : std::runtime_error {
    explicit OverlappingSpans(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownReplacementToken : std::runtime_error {
    explicit UnknownReplacementToken(const std::string& what) : std::runtime_error(what) {}
};

struct IdOutOfRange : std::runtime_error {
    explicit IdOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyCorpus : std::runtime_error {
    explicit EmptyCorpus(const std::string& what) : std::runtime_error(what) {}
};

struct MalformedVocabFile : std::runtime_error {
    explicit MalformedVocabFile(const std::string& what) : std::runtime_error(what) {}
};

struct RootNotFound : std::runtime_error {
    explicit RootNotFound(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroNormalizer : std::runtime_error {
    explicit ZeroNormalizer(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tokompiler
