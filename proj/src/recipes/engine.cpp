#include "souschef/recipes/engine.hpp"

#include "souschef/core/format.hpp"
#include "souschef/llm/extract.hpp"
#include "souschef/llm/prompt.hpp"

#include <algorithm>
#include <sstream>

namespace souschef::recipes {

namespace {

bool blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

// Lowercased and whitespace-collapsed; blank text maps to "".
std::string fold(std::string_view text) {
    return blank(text) ? std::string{} : canonicalize(text);
}

bool overlaps(const std::string& a, const std::string& b) {
    return !a.empty() && !b.empty() &&
           (a.find(b) != std::string::npos || b.find(a) != std::string::npos);
}

bool in_pantry(std::span<const Ingredient> pantry, std::string_view key) {
    return std::any_of(pantry.begin(), pantry.end(),
                       [&](const Ingredient& i) { return i.canonical_key() == key; });
}

std::string list_or_none(const std::vector<std::string>& items) {
    return items.empty() ? "none" : join(items, ", ");
}

} // namespace

std::string_view to_string(AllergenSource source) {
    return source == AllergenSource::declared_allergen_list ? "declared_allergen_list"
                                                            : "ingredient_name";
}

StaplesPolicy::StaplesPolicy(const std::vector<std::string>& names) {
    for (const auto& name : names) keys_.insert(canonicalize(name));
}

bool StaplesPolicy::allows(std::string_view canonical_key) const {
    return keys_.find(canonical_key) != keys_.end();
}

ValidationReport validate_recipe(const Recipe& recipe, std::span<const Ingredient> pantry,
                                 const StaplesPolicy& staples) {
    ValidationReport report;
    report.recipe_id = recipe.id;
    for (const auto& item : recipe.required) {
        if (!in_pantry(pantry, item.canonical_key) && !staples.allows(item.canonical_key) &&
            std::find(report.missing_ingredients.begin(), report.missing_ingredients.end(),
                      item.canonical_key) == report.missing_ingredients.end()) {
            report.missing_ingredients.push_back(item.canonical_key);
        }
    }
    report.nutrition_complete = recipe.nutrition.complete();

    if (blank(recipe.title)) report.schema_errors.push_back("title is empty");
    if (recipe.servings < 1) report.schema_errors.push_back("servings must be positive");
    if (recipe.required.empty()) report.schema_errors.push_back("required is empty");
    if (recipe.steps.empty()) report.schema_errors.push_back("steps is empty");
    for (std::size_t i = 0; i < recipe.required.size(); ++i) {
        if (blank(recipe.required[i].amount)) {
            report.schema_errors.push_back("required[" + std::to_string(i) + "].amount is empty");
        }
    }
    for (std::size_t i = 0; i < recipe.steps.size(); ++i) {
        if (blank(recipe.steps[i])) {
            report.schema_errors.push_back("steps[" + std::to_string(i) + "] is empty");
        }
    }
    if (recipe.rating && (*recipe.rating < 1 || *recipe.rating > 5)) {
        report.schema_errors.push_back("rating must be 1-5");
    }
    report.ok = report.missing_ingredients.empty() && report.nutrition_complete &&
                report.schema_errors.empty();
    return report;
}

AllergenReport check_allergens(const Recipe& recipe, const UserProfile& profile) {
    AllergenReport report;
    report.recipe_id = recipe.id;
    for (const auto& allergy : profile.allergies) {
        std::string needle = fold(allergy);
        if (needle.empty()) continue;
        for (const auto& declared : recipe.allergens) {
            if (overlaps(needle, fold(declared))) {
                report.hits.push_back({allergy, AllergenSource::declared_allergen_list, declared});
            }
        }
        for (const auto& item : recipe.required) {
            if (overlaps(needle, item.canonical_key)) {
                report.hits.push_back({allergy, AllergenSource::ingredient_name, item.canonical_key});
            }
        }
    }
    return report;
}

std::vector<RequiredIngredient> shopping_list(const Recipe& recipe,
                                              std::span<const Ingredient> pantry) {
    std::vector<RequiredIngredient> items;
    for (const auto& item : recipe.required) {
        if (!in_pantry(pantry, item.canonical_key)) items.push_back(item);
    }
    return items;
}

std::vector<RatedRecipe> ratings_of(const PantrySession& session) {
    std::vector<RatedRecipe> out;
    for (const auto& recipe : session.offered_recipes) {
        if (recipe.rating) out.push_back({recipe.title, *recipe.rating});
    }
    return out;
}

std::string describe_profile(const UserProfile& profile, std::span<const RatedRecipe> ratings) {
    std::ostringstream ss;
    ss << "Dietary restrictions: " << list_or_none(profile.dietary_restrictions) << "\n";
    ss << "Allergies: " << list_or_none(profile.allergies) << "\n";
    ss << "Favorite cuisines: " << list_or_none(profile.favorite_cuisines) << "\n";
    ss << "Cooking level: " << profile.cooking_level << " of 5";
    if (!ratings.empty()) {
        ss << "\nPast meal ratings (1-5 stars):";
        for (const auto& r : ratings) ss << "\n- " << r.title << ": " << r.stars;
    }
    return ss.str();
}

NoValidRecipesError::NoValidRecipesError(std::vector<RecipeRejection> rejections)
    : Error(ErrorKind::no_valid_recipes,
            "none of the " + std::to_string(rejections.size()) +
                " generated recipes passed validation"),
      rejections_(std::move(rejections)) {}

GenerationResult generate_recipes(const llm::Gateway& gateway, PantrySession session,
                                  const UserProfile& profile, const GenerationRequest& request) {
    if (session.ingredients.empty()) {
        throw Error(ErrorKind::precondition, "the pantry is empty; scan or add ingredients first",
                    "ingredients");
    }
    if (request.count < 1) {
        throw Error(ErrorKind::precondition, "count must be at least 1", "count");
    }

    llm::LlmRequest llm_request;
    llm_request.template_id = llm::TemplateId::generate_recipes;
    llm_request.user_text = llm::render_prompt(
        llm_request.template_id,
        {{"count", std::to_string(request.count)},
         {"ingredients", pantry_keys(session)},
         {"profile", describe_profile(profile, request.past_ratings)},
         {"language", std::string(english_name(profile.language))}});
    llm_request.language = profile.language;
    llm_request.max_output_tokens = request.call.max_output_tokens;
    llm_request.fixture_tag = request.call.fixture_tag;

    auto response = gateway.complete(llm_request);
    auto candidates = std::get<std::vector<Recipe>>(
        llm::extract_structured(response.raw_text, llm::SchemaId::recipes));

    GenerationResult result;
    for (auto& recipe : candidates) {
        bool clash = recipe.id.empty() || session.find_recipe(recipe.id) ||
                     std::any_of(result.recipes.begin(), result.recipes.end(),
                                 [&](const Recipe& r) { return r.id == recipe.id; });
        if (clash) recipe.id = make_id("rcp");
        recipe.rating.reset();

        auto validation = validate_recipe(recipe, session.ingredients, request.staples);
        auto allergens = check_allergens(recipe, profile);
        if (!validation.ok || !allergens.safe()) {
            result.rejected.push_back({std::move(recipe), std::move(validation), std::move(allergens)});
            continue;
        }
        if (static_cast<int>(result.recipes.size()) < request.count) {
            result.recipes.push_back(std::move(recipe));
        }
    }
    if (result.recipes.empty()) throw NoValidRecipesError(std::move(result.rejected));

    result.shortfall = std::max(0, request.count - static_cast<int>(result.recipes.size()));
    session.offered_recipes.insert(session.offered_recipes.end(), result.recipes.begin(),
                                   result.recipes.end());
    result.session = std::move(session);
    return result;
}

PantrySession rate_recipe(PantrySession session, std::string_view recipe_id, int stars) {
    Recipe* recipe = session.find_recipe(recipe_id);
    if (!recipe) {
        throw Error(ErrorKind::not_found, "recipe " + std::string(recipe_id) + " was not offered",
                    std::string(recipe_id));
    }
    if (stars < 1 || stars > 5) {
        throw Error(ErrorKind::out_of_range, "rating must be between 1 and 5 stars", "stars");
    }
    recipe->rating = stars;
    return session;
}

} // namespace souschef::recipes
