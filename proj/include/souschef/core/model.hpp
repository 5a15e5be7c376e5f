#pragma once

#include "souschef/i18n/language.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace souschef {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now();
Timestamp from_epoch_ms(std::int64_t ms);
std::int64_t to_epoch_ms(Timestamp t);

// Random opaque identifier with a readable prefix, e.g. "s-3f9a0c1b2d4e5f60".
std::string make_id(std::string_view prefix);

// Lowercases ASCII letters, trims, and collapses internal whitespace runs to a
// single space. Non-ASCII bytes pass through untouched. Throws
// ErrorKind::invalid_name for blank input.
std::string canonicalize(std::string_view name);

enum class IngredientSource { scanned, manual };

class Ingredient {
public:
    Ingredient(std::string display_name, IngredientSource source, Timestamp first_seen,
               std::optional<std::string> quantity = std::nullopt);

    const std::string& display_name() const noexcept { return display_name_; }
    const std::string& canonical_key() const noexcept { return canonical_key_; }
    const std::optional<std::string>& quantity() const noexcept { return quantity_; }
    IngredientSource source() const noexcept { return source_; }
    Timestamp first_seen() const noexcept { return first_seen_; }

    bool operator==(const Ingredient&) const = default;

private:
    std::string display_name_;
    std::string canonical_key_;
    std::optional<std::string> quantity_;
    IngredientSource source_;
    Timestamp first_seen_;
};

// Bounding box in a 0-1000 normalized frame, [y_min, x_min, y_max, x_max].
struct NormBox {
    int y_min = 0;
    int x_min = 0;
    int y_max = 0;
    int x_max = 0;

    static constexpr int scale = 1000;

    constexpr bool valid() const noexcept {
        return 0 <= y_min && y_min < y_max && y_max <= scale &&
               0 <= x_min && x_min < x_max && x_max <= scale;
    }
    // Throws ErrorKind::invalid_input if the coordinates break the frame.
    static NormBox checked(int y_min, int x_min, int y_max, int x_max);

    bool operator==(const NormBox&) const = default;
};

struct DetectionLabel {
    std::string name;
    NormBox bbox;
    std::optional<double> confidence;

    bool operator==(const DetectionLabel&) const = default;
};

struct NutritionFacts {
    std::optional<double> calories;
    std::optional<double> fat_g;
    std::optional<double> carbohydrates_g;
    std::optional<double> fiber_g;
    std::optional<double> protein_g;
    std::map<std::string, std::string> vitamins;

    // Calories, fat, carbohydrates and protein are mandatory; fiber and
    // vitamins are optional.
    bool complete() const noexcept {
        return calories && fat_g && carbohydrates_g && protein_g;
    }

    bool operator==(const NutritionFacts&) const = default;
};

struct RequiredIngredient {
    std::string canonical_key;
    std::string display_name;
    std::string amount;

    bool operator==(const RequiredIngredient&) const = default;
};

struct Recipe {
    std::string id;
    std::string title;
    std::string cuisine;
    int servings = 1;
    std::vector<RequiredIngredient> required;
    std::vector<std::string> steps;
    NutritionFacts nutrition;
    std::vector<std::string> allergens;
    std::optional<int> rating;

    bool operator==(const Recipe&) const = default;
};

struct UserProfile {
    std::string id;
    std::vector<std::string> dietary_restrictions;
    std::vector<std::string> allergies;
    std::vector<std::string> favorite_cuisines;
    int cooking_level = 3;
    Language language = Language::en;

    bool operator==(const UserProfile&) const = default;
};

enum class Role { user, assistant };
enum class Modality { text, voice_transcript };

struct ChatTurn {
    Role role = Role::user;
    Modality modality = Modality::text;
    std::string content;
    Timestamp timestamp{};
    // Set on a user turn whose reply failed at the provider.
    bool unanswered = false;

    bool operator==(const ChatTurn&) const = default;
};

struct PantrySession {
    std::string id;
    std::vector<Ingredient> ingredients;
    std::vector<Recipe> offered_recipes;
    std::optional<std::string> selected_recipe;
    std::vector<ChatTurn> chat_history;
    std::string profile_id;
    Timestamp created_at{};

    const Ingredient* find_ingredient(std::string_view canonical_key) const;
    bool has_ingredient(std::string_view canonical_key) const {
        return find_ingredient(canonical_key) != nullptr;
    }
    Recipe* find_recipe(std::string_view recipe_id);
    const Recipe* find_recipe(std::string_view recipe_id) const;
    const Recipe* selected() const;

    bool operator==(const PantrySession&) const = default;
};

enum class Verdict { correct, needs_adjustment };

struct StepFeedback {
    int step_index = 0;
    Verdict verdict = Verdict::correct;
    std::string explanation;

    bool operator==(const StepFeedback&) const = default;
};

enum class SurveySection { background, usability };

struct LikertResponse {
    std::string participant_id;
    int round = 1;
    SurveySection section = SurveySection::usability;
    std::string question_id;
    int score = 3;

    bool operator==(const LikertResponse&) const = default;
};

std::string_view to_string(IngredientSource v);
std::string_view to_string(Role v);
std::string_view to_string(Modality v);
std::string_view to_string(Verdict v);
std::string_view to_string(SurveySection v);
std::optional<Modality> parse_modality(std::string_view s);
std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<SurveySection> parse_section(std::string_view s);

} // namespace souschef
