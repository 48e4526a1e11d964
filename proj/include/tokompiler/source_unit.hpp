#pragma once

#include <string>

namespace tokompiler {

enum class Language { C, Cpp, Fortran };

std::string to_string(Language lang);
Language language_from_string(const std::string& name);

/// One input file or extracted function. `text` is UTF-8 (ingestion decodes
/// with lossy replacement); `language` is fixed at ingestion.
struct SourceUnit {
    std::string id;
    Language language = Language::C;
    std::string origin;
    std::string text;
};

} // namespace tokompiler
