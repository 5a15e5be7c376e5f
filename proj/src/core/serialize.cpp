#include "souschef/core/serialize.hpp"

#include <cmath>
#include <set>

namespace souschef {

namespace json_detail {

std::string join_path(const std::string& head, const std::string& tail) {
    if (tail.empty()) return head;
    if (head.empty()) return tail;
    if (tail.front() == '[') return head + tail;
    return head + "." + tail;
}

} // namespace json_detail

namespace {

[[noreturn]] void violation(std::string message, std::string path) {
    throw Error(ErrorKind::schema_violation, std::move(message), std::move(path));
}

void put_ts(Json& j, const char* key, Timestamp t) { j[key] = to_epoch_ms(t); }

Timestamp get_ts(const Json& j, const char* key) {
    return from_epoch_ms(required_field<std::int64_t>(j, key));
}

// Accepts 120 or 120.0 but not 120.5 or "120".
int integral(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) violation(std::string("missing field ") + key, key);
    if (it->is_number_integer()) return it->get<int>();
    if (it->is_number_float()) {
        double d = it->get<double>();
        if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    violation(std::string("expected an integer for ") + key, key);
}

std::optional<double> non_negative(const Json& j, const char* key) {
    auto v = optional_field<double>(j, key);
    if (v && !(*v >= 0.0)) violation(std::string(key) + " must be >= 0", key);
    return v;
}

template <class Enum, class Parse>
Enum enum_field(const Json& j, const char* key, Parse parse) {
    auto text = required_field<std::string>(j, key);
    auto value = parse(text);
    if (!value) violation("unknown value '" + text + "' for " + key, key);
    return *value;
}

std::optional<IngredientSource> parse_source(std::string_view s) {
    if (s == "scanned") return IngredientSource::scanned;
    if (s == "manual") return IngredientSource::manual;
    return std::nullopt;
}

std::optional<Role> parse_role(std::string_view s) {
    if (s == "user") return Role::user;
    if (s == "assistant") return Role::assistant;
    return std::nullopt;
}

template <class T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

} // namespace

void to_json(Json& j, const Ingredient& v) {
    j = Json{{"display_name", v.display_name()},
             {"canonical_key", v.canonical_key()},
             {"source", to_string(v.source())}};
    put_optional(j, "quantity", v.quantity());
    put_ts(j, "first_seen", v.first_seen());
}

Ingredient ingredient_from_json(const Json& j) {
    auto name = required_field<std::string>(j, "display_name");
    std::string key;
    try {
        key = canonicalize(name);
    } catch (const Error&) {
        violation("display_name is blank", "display_name");
    }
    if (auto given = optional_field<std::string>(j, "canonical_key"); given && *given != key) {
        violation("canonical_key does not match display_name", "canonical_key");
    }
    return Ingredient(std::move(name), enum_field<IngredientSource>(j, "source", parse_source),
                      get_ts(j, "first_seen"), optional_field<std::string>(j, "quantity"));
}

void to_json(Json& j, const NormBox& v) {
    j = Json{{"y_min", v.y_min}, {"x_min", v.x_min}, {"y_max", v.y_max}, {"x_max", v.x_max}};
}

void from_json(const Json& j, NormBox& v) {
    v = NormBox{integral(j, "y_min"), integral(j, "x_min"), integral(j, "y_max"),
                integral(j, "x_max")};
    if (!v.valid()) violation("bounding box outside the 0-1000 frame or inverted", "");
}

void to_json(Json& j, const DetectionLabel& v) {
    j = Json{{"name", v.name}, {"bbox", v.bbox}};
    put_optional(j, "confidence", v.confidence);
}

void from_json(const Json& j, DetectionLabel& v) {
    v.name = required_field<std::string>(j, "name");
    if (v.name.find_first_not_of(" \t\r\n") == std::string::npos) violation("blank name", "name");
    v.bbox = required_field<NormBox>(j, "bbox");
    v.confidence = optional_field<double>(j, "confidence");
    if (v.confidence && !(*v.confidence >= 0.0 && *v.confidence <= 1.0)) {
        violation("confidence must be in [0,1]", "confidence");
    }
}

void to_json(Json& j, const NutritionFacts& v) {
    j = Json::object();
    put_optional(j, "calories", v.calories);
    put_optional(j, "fat_g", v.fat_g);
    put_optional(j, "carbohydrates_g", v.carbohydrates_g);
    put_optional(j, "fiber_g", v.fiber_g);
    put_optional(j, "protein_g", v.protein_g);
    j["vitamins"] = v.vitamins;
}

void from_json(const Json& j, NutritionFacts& v) {
    if (!j.is_object()) violation("expected an object", "");
    v.calories = non_negative(j, "calories");
    v.fat_g = non_negative(j, "fat_g");
    v.carbohydrates_g = non_negative(j, "carbohydrates_g");
    v.fiber_g = non_negative(j, "fiber_g");
    v.protein_g = non_negative(j, "protein_g");
    v.vitamins.clear();
    if (auto it = j.find("vitamins"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) violation("expected an object", "vitamins");
        for (const auto& [name, amount] : it->items()) {
            v.vitamins[name] = amount.is_string() ? amount.get<std::string>() : amount.dump();
        }
    }
}

void to_json(Json& j, const RequiredIngredient& v) {
    j = Json{{"canonical_key", v.canonical_key},
             {"display_name", v.display_name},
             {"amount", v.amount}};
}

void from_json(const Json& j, RequiredIngredient& v) {
    // Model output tends to say "name"; the canonical form says "display_name".
    auto name = optional_field<std::string>(j, "display_name");
    if (!name) name = optional_field<std::string>(j, "name");
    if (!name) violation("missing field display_name", "display_name");
    v.display_name = *name;
    try {
        v.canonical_key = canonicalize(v.display_name);
    } catch (const Error&) {
        violation("display_name is blank", "display_name");
    }
    if (auto given = optional_field<std::string>(j, "canonical_key");
        given && *given != v.canonical_key) {
        violation("canonical_key does not match display_name", "canonical_key");
    }
    v.amount = field_or<std::string>(j, "amount", "");
}

void to_json(Json& j, const Recipe& v) {
    j = Json{{"id", v.id},
             {"title", v.title},
             {"cuisine", v.cuisine},
             {"servings", v.servings},
             {"required", v.required},
             {"steps", v.steps},
             {"nutrition", v.nutrition},
             {"allergens", v.allergens}};
    put_optional(j, "rating", v.rating);
}

void from_json(const Json& j, Recipe& v) {
    if (!j.is_object()) violation("expected an object", "");
    v.id = field_or<std::string>(j, "id", "");
    v.title = required_field<std::string>(j, "title");
    v.cuisine = field_or<std::string>(j, "cuisine", "");
    v.servings = j.contains("servings") && !j["servings"].is_null() ? integral(j, "servings") : 1;
    if (v.servings < 1) violation("servings must be positive", "servings");
    v.required = field_or<std::vector<RequiredIngredient>>(j, "required", {});
    v.steps = field_or<std::vector<std::string>>(j, "steps", {});
    v.nutrition = field_or<NutritionFacts>(j, "nutrition", {});
    v.allergens = field_or<std::vector<std::string>>(j, "allergens", {});
    v.rating.reset();
    if (j.contains("rating") && !j["rating"].is_null()) {
        int stars = integral(j, "rating");
        if (stars < 1 || stars > 5) violation("rating must be 1-5", "rating");
        v.rating = stars;
    }
}

void to_json(Json& j, const UserProfile& v) {
    j = Json{{"id", v.id},
             {"dietary_restrictions", v.dietary_restrictions},
             {"allergies", v.allergies},
             {"favorite_cuisines", v.favorite_cuisines},
             {"cooking_level", v.cooking_level},
             {"language", tag(v.language)}};
}

void from_json(const Json& j, UserProfile& v) {
    if (!j.is_object()) violation("expected an object", "");
    v.id = field_or<std::string>(j, "id", "");
    v.dietary_restrictions = field_or<std::vector<std::string>>(j, "dietary_restrictions", {});
    v.allergies = field_or<std::vector<std::string>>(j, "allergies", {});
    v.favorite_cuisines = field_or<std::vector<std::string>>(j, "favorite_cuisines", {});
    v.cooking_level = j.contains("cooking_level") ? integral(j, "cooking_level") : 3;
    if (v.cooking_level < 1 || v.cooking_level > 5) {
        violation("cooking_level must be 1-5", "cooking_level");
    }
    v.language = j.contains("language")
                     ? enum_field<Language>(j, "language",
                                            [](std::string_view s) { return parse_language(s); })
                     : Language::en;
}

void to_json(Json& j, const ChatTurn& v) {
    j = Json{{"role", to_string(v.role)},
             {"modality", to_string(v.modality)},
             {"content", v.content}};
    put_ts(j, "timestamp", v.timestamp);
    if (v.unanswered) j["unanswered"] = true;
}

void from_json(const Json& j, ChatTurn& v) {
    v.role = enum_field<Role>(j, "role", parse_role);
    v.modality = enum_field<Modality>(j, "modality", parse_modality);
    v.content = required_field<std::string>(j, "content");
    if (v.content.empty()) violation("content must be non-empty", "content");
    v.timestamp = get_ts(j, "timestamp");
    v.unanswered = field_or<bool>(j, "unanswered", false);
}

void to_json(Json& j, const PantrySession& v) {
    j = Json{{"id", v.id},
             {"ingredients", v.ingredients},
             {"offered_recipes", v.offered_recipes},
             {"chat_history", v.chat_history},
             {"profile_id", v.profile_id}};
    put_optional(j, "selected_recipe", v.selected_recipe);
    put_ts(j, "created_at", v.created_at);
}

void from_json(const Json& j, PantrySession& v) {
    v.id = required_field<std::string>(j, "id");
    v.ingredients = field_or<std::vector<Ingredient>>(j, "ingredients", {});
    std::set<std::string> keys;
    for (std::size_t i = 0; i < v.ingredients.size(); ++i) {
        if (!keys.insert(v.ingredients[i].canonical_key()).second) {
            violation("duplicate canonical_key", "ingredients[" + std::to_string(i) + "]");
        }
    }
    v.offered_recipes = field_or<std::vector<Recipe>>(j, "offered_recipes", {});
    v.chat_history = field_or<std::vector<ChatTurn>>(j, "chat_history", {});
    v.profile_id = required_field<std::string>(j, "profile_id");
    v.selected_recipe = optional_field<std::string>(j, "selected_recipe");
    if (v.selected_recipe && !v.find_recipe(*v.selected_recipe)) {
        violation("selected_recipe is not an offered recipe", "selected_recipe");
    }
    v.created_at = get_ts(j, "created_at");
}

void to_json(Json& j, const StepFeedback& v) {
    j = Json{{"step_index", v.step_index},
             {"verdict", to_string(v.verdict)},
             {"explanation", v.explanation}};
}

void from_json(const Json& j, StepFeedback& v) {
    v.step_index = integral(j, "step_index");
    if (v.step_index < 0) violation("step_index must be >= 0", "step_index");
    v.verdict = enum_field<Verdict>(j, "verdict", parse_verdict);
    v.explanation = field_or<std::string>(j, "explanation", "");
    if (v.verdict == Verdict::needs_adjustment && v.explanation.empty()) {
        violation("explanation required when verdict is needs_adjustment", "explanation");
    }
}

void to_json(Json& j, const LikertResponse& v) {
    j = Json{{"participant_id", v.participant_id},
             {"round", v.round},
             {"section", to_string(v.section)},
             {"question_id", v.question_id},
             {"score", v.score}};
}

void from_json(const Json& j, LikertResponse& v) {
    v.participant_id = required_field<std::string>(j, "participant_id");
    v.round = integral(j, "round");
    if (v.round < 1 || v.round > 3) violation("round must be 1-3", "round");
    v.section = enum_field<SurveySection>(j, "section", parse_section);
    v.question_id = required_field<std::string>(j, "question_id");
    v.score = integral(j, "score");
    if (v.score < 1 || v.score > 5) violation("score must be 1-5", "score");
}

} // namespace souschef
