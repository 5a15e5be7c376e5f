#include "souschef/core/model.hpp"

#include "souschef/error.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <random>

namespace souschef {

namespace {

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

} // namespace

Timestamp now() {
    return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

Timestamp from_epoch_ms(std::int64_t ms) {
    return Timestamp{std::chrono::milliseconds{ms}};
}

std::int64_t to_epoch_ms(Timestamp t) {
    return t.time_since_epoch().count();
}

std::string make_id(std::string_view prefix) {
    static std::mutex mutex;
    static std::mt19937_64 rng{std::random_device{}()};
    std::uint64_t value = 0;
    {
        std::lock_guard lock(mutex);
        value = rng();
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string id(prefix);
    id += '-';
    for (int shift = 60; shift >= 0; shift -= 4) id += hex[(value >> shift) & 0xF];
    return id;
}

std::string canonicalize(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    bool pending_space = false;
    for (unsigned char c : name) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += (c < 0x80) ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    }
    if (out.empty()) throw Error(ErrorKind::invalid_name, "ingredient name is blank");
    return out;
}

Ingredient::Ingredient(std::string display_name, IngredientSource source, Timestamp first_seen,
                       std::optional<std::string> quantity)
    : display_name_(std::move(display_name)), canonical_key_(canonicalize(display_name_)),
      quantity_(std::move(quantity)), source_(source), first_seen_(first_seen) {}

NormBox NormBox::checked(int y_min, int x_min, int y_max, int x_max) {
    NormBox box{y_min, x_min, y_max, x_max};
    if (!box.valid()) {
        throw Error(ErrorKind::invalid_input, "bounding box outside the 0-1000 frame or inverted",
                    "bbox");
    }
    return box;
}

const Ingredient* PantrySession::find_ingredient(std::string_view canonical_key) const {
    auto it = std::find_if(ingredients.begin(), ingredients.end(),
                           [&](const Ingredient& i) { return i.canonical_key() == canonical_key; });
    return it == ingredients.end() ? nullptr : &*it;
}

Recipe* PantrySession::find_recipe(std::string_view recipe_id) {
    auto it = std::find_if(offered_recipes.begin(), offered_recipes.end(),
                           [&](const Recipe& r) { return r.id == recipe_id; });
    return it == offered_recipes.end() ? nullptr : &*it;
}

const Recipe* PantrySession::find_recipe(std::string_view recipe_id) const {
    return const_cast<PantrySession*>(this)->find_recipe(recipe_id);
}

const Recipe* PantrySession::selected() const {
    return selected_recipe ? find_recipe(*selected_recipe) : nullptr;
}

std::string_view to_string(IngredientSource v) {
    return v == IngredientSource::scanned ? "scanned" : "manual";
}
std::string_view to_string(Role v) { return v == Role::user ? "user" : "assistant"; }
std::string_view to_string(Modality v) {
    return v == Modality::text ? "text" : "voice_transcript";
}
std::string_view to_string(Verdict v) {
    return v == Verdict::correct ? "correct" : "needs_adjustment";
}
std::string_view to_string(SurveySection v) {
    return v == SurveySection::background ? "background" : "usability";
}

std::optional<Modality> parse_modality(std::string_view s) {
    if (s == "text") return Modality::text;
    if (s == "voice_transcript") return Modality::voice_transcript;
    return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view s) {
    if (s == "correct") return Verdict::correct;
    if (s == "needs_adjustment") return Verdict::needs_adjustment;
    return std::nullopt;
}

std::optional<SurveySection> parse_section(std::string_view s) {
    if (s == "background") return SurveySection::background;
    if (s == "usability") return SurveySection::usability;
    return std::nullopt;
}

} // namespace souschef
