#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace souschef {

// The eight interface languages.
enum class Language { en, es, fr, zh, ja, ar, fa, hi };

inline constexpr std::array<Language, 8> all_languages{
    Language::en, Language::es, Language::fr, Language::zh,
    Language::ja, Language::ar, Language::fa, Language::hi,
};

std::string_view tag(Language lang);
// English name used inside prompts ("Persian" for fa).
std::string_view english_name(Language lang);
bool is_right_to_left(Language lang);
std::optional<Language> parse_language(std::string_view tag);

} // namespace souschef
