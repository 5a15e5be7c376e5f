#pragma once

#include "souschef/core/serialize.hpp"
#include "souschef/i18n/language.hpp"
#include "souschef/llm/gateway.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace souschef::i18n {

// Every fixed interface string has one of these keys. Catalog files must
// provide all of them and nothing else.
std::span<const std::string_view> catalog_keys();

// Problems with the catalog directory `{dir}/{tag}.json`; empty when every
// language file exists, declares the right tag and direction, and holds a
// non-empty value for exactly the catalog keys.
std::vector<std::string> check_catalogs(const std::filesystem::path& dir);

// Immutable after load; safe to share across threads.
class Catalog {
public:
    // Throws Error{load_error} listing every problem if the catalogs are
    // incomplete.
    static Catalog load(const std::filesystem::path& dir);

    // Throws Error{missing_key} for keys outside the catalog schema.
    const std::string& lookup(std::string_view key, Language language) const;
    bool right_to_left(Language language) const;
    // The whole table for one language, as served to the UI.
    Json table(Language language) const;

private:
    struct Table {
        bool rtl = false;
        std::map<std::string, std::string, std::less<>> strings;
    };
    std::map<Language, Table> tables_;
};

const std::string& static_string(const Catalog& catalog, std::string_view key, Language language);

// Model-backed translation of generated text. English input is returned
// unchanged without a model call. Throws Error{precondition} on empty text;
// gateway and extraction errors propagate.
std::string localize_dynamic(const llm::Gateway& gateway, const std::string& text,
                             Language language, const llm::CallOptions& options = {});

struct Localized {
    std::string text;
    // True when translation failed and `text` is the original.
    bool untranslated = false;
};

// Like localize_dynamic, but falls back to the original text on provider or
// extraction failure and says so.
Localized localize_or_original(const llm::Gateway& gateway, const std::string& text,
                               Language language, const llm::CallOptions& options = {});

} // namespace souschef::i18n
