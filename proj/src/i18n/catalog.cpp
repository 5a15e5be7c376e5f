#include "souschef/i18n/catalog.hpp"

#include "souschef/error.hpp"
#include "souschef/llm/extract.hpp"
#include "souschef/llm/prompt.hpp"

#include <algorithm>
#include <array>
#include <fstream>

namespace souschef::i18n {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 40> keys{
    "app_title",
    "scan_button",
    "nothing_detected",
    "pantry_title",
    "add_ingredient_placeholder",
    "add_button",
    "remove_button",
    "generate_recipes_button",
    "recipes_title",
    "select_recipe_button",
    "rate_recipe_label",
    "shopping_list_button",
    "shopping_list_title",
    "nutrition_title",
    "calories",
    "fat",
    "carbohydrates",
    "fiber",
    "protein",
    "vitamins",
    "allergens",
    "chat_title",
    "chat_placeholder",
    "send_button",
    "push_to_talk",
    "check_step_button",
    "step_correct",
    "step_needs_adjustment",
    "timers_title",
    "timer_start",
    "timer_pause",
    "timer_resume",
    "timer_expired",
    "settings_title",
    "language_label",
    "dietary_restrictions_label",
    "allergies_label",
    "favorite_cuisines_label",
    "cooking_level_label",
    "save_button",
};

bool is_key(std::string_view key) {
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

Json read_json(const fs::path& path, std::vector<std::string>& problems) {
    std::ifstream in(path);
    if (!in) {
        problems.push_back(path.filename().string() + ": missing");
        return nullptr;
    }
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        problems.push_back(path.filename().string() + ": not a JSON object");
        return nullptr;
    }
    return doc;
}

} // namespace

std::span<const std::string_view> catalog_keys() { return keys; }

std::vector<std::string> check_catalogs(const fs::path& dir) {
    std::vector<std::string> problems;
    for (Language lang : all_languages) {
        fs::path path = dir / (std::string(tag(lang)) + ".json");
        std::string name = path.filename().string();
        Json doc = read_json(path, problems);
        if (doc.is_null()) continue;

        if (doc.value("language", "") != tag(lang)) problems.push_back(name + ": wrong language tag");
        std::string expected_dir = is_right_to_left(lang) ? "rtl" : "ltr";
        if (doc.value("direction", "") != expected_dir) {
            problems.push_back(name + ": direction must be " + expected_dir);
        }
        if (!doc.contains("strings") || !doc["strings"].is_object()) {
            problems.push_back(name + ": missing strings table");
            continue;
        }
        const Json& strings = doc["strings"];
        for (std::string_view key : keys) {
            auto it = strings.find(std::string(key));
            if (it == strings.end()) {
                problems.push_back(name + ": missing key " + std::string(key));
            } else if (!it->is_string() || it->get<std::string>().empty()) {
                problems.push_back(name + ": empty value for " + std::string(key));
            }
        }
        for (const auto& [key, value] : strings.items()) {
            if (!is_key(key)) problems.push_back(name + ": unknown key " + key);
        }
    }
    return problems;
}

Catalog Catalog::load(const fs::path& dir) {
    auto problems = check_catalogs(dir);
    if (!problems.empty()) {
        std::string message = "incomplete string catalogs in " + dir.string() + ":";
        for (const auto& p : problems) message += "\n  " + p;
        throw Error(ErrorKind::load_error, message, dir.string());
    }
    Catalog catalog;
    for (Language lang : all_languages) {
        std::vector<std::string> unused;
        Json doc = read_json(dir / (std::string(tag(lang)) + ".json"), unused);
        Table table;
        table.rtl = doc["direction"] == "rtl";
        for (const auto& [key, value] : doc["strings"].items()) {
            table.strings.emplace(key, value.get<std::string>());
        }
        catalog.tables_.emplace(lang, std::move(table));
    }
    return catalog;
}

const std::string& Catalog::lookup(std::string_view key, Language language) const {
    const Table& table = tables_.at(language);
    auto it = table.strings.find(key);
    if (it == table.strings.end()) {
        throw Error(ErrorKind::missing_key, "no catalog entry for '" + std::string(key) + "'",
                    std::string(key));
    }
    return it->second;
}

bool Catalog::right_to_left(Language language) const { return tables_.at(language).rtl; }

Json Catalog::table(Language language) const {
    const Table& t = tables_.at(language);
    Json strings = Json::object();
    for (const auto& [key, value] : t.strings) strings[key] = value;
    return Json{{"language", tag(language)},
                {"direction", t.rtl ? "rtl" : "ltr"},
                {"strings", std::move(strings)}};
}

const std::string& static_string(const Catalog& catalog, std::string_view key, Language language) {
    return catalog.lookup(key, language);
}

std::string localize_dynamic(const llm::Gateway& gateway, const std::string& text,
                             Language language, const llm::CallOptions& options) {
    if (text.empty()) throw Error(ErrorKind::precondition, "nothing to translate", "text");
    if (language == Language::en) return text;

    llm::LlmRequest request;
    request.template_id = llm::TemplateId::translate;
    request.user_text = llm::render_prompt(
        request.template_id, {{"language", std::string(english_name(language))}, {"text", text}});
    request.language = language;
    request.max_output_tokens = options.max_output_tokens;
    request.fixture_tag = options.fixture_tag;

    auto response = gateway.complete(request);
    return std::get<llm::TranslationPayload>(
               llm::extract_structured(response.raw_text, llm::SchemaId::translation))
        .text;
}

Localized localize_or_original(const llm::Gateway& gateway, const std::string& text,
                               Language language, const llm::CallOptions& options) {
    try {
        return {localize_dynamic(gateway, text, language, options), false};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::precondition) throw;
        return {text, true};
    }
}

} // namespace souschef::i18n
