#include "souschef/i18n/language.hpp"

namespace souschef {

std::string_view tag(Language lang) {
    switch (lang) {
    case Language::en: return "en";
    case Language::es: return "es";
    case Language::fr: return "fr";
    case Language::zh: return "zh";
    case Language::ja: return "ja";
    case Language::ar: return "ar";
    case Language::fa: return "fa";
    case Language::hi: return "hi";
    }
    return "en";
}

std::string_view english_name(Language lang) {
    switch (lang) {
    case Language::en: return "English";
    case Language::es: return "Spanish";
    case Language::fr: return "French";
    case Language::zh: return "Chinese";
    case Language::ja: return "Japanese";
    case Language::ar: return "Arabic";
    case Language::fa: return "Persian";
    case Language::hi: return "Hindi";
    }
    return "English";
}

bool is_right_to_left(Language lang) {
    return lang == Language::ar || lang == Language::fa;
}

std::optional<Language> parse_language(std::string_view value) {
    for (Language lang : all_languages) {
        if (tag(lang) == value) return lang;
    }
    return std::nullopt;
}

} // namespace souschef
