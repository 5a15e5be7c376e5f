#pragma once

#include "souschef/core/model.hpp"
#include "souschef/error.hpp"
#include "souschef/llm/gateway.hpp"

#include <set>
#include <span>
#include <string>
#include <vector>

namespace souschef::recipes {

struct ValidationReport {
    std::string recipe_id;
    bool ok = false;
    std::vector<std::string> missing_ingredients;
    bool nutrition_complete = false;
    std::vector<std::string> schema_errors;

    bool operator==(const ValidationReport&) const = default;
};

enum class AllergenSource { declared_allergen_list, ingredient_name };

std::string_view to_string(AllergenSource source);

struct AllergenHit {
    // The profile allergy that fired.
    std::string allergen;
    AllergenSource matched_in = AllergenSource::declared_allergen_list;
    // The recipe text it matched (declared allergen or ingredient key).
    std::string matched;

    bool operator==(const AllergenHit&) const = default;
};

struct AllergenReport {
    std::string recipe_id;
    std::vector<AllergenHit> hits;

    bool safe() const noexcept { return hits.empty(); }
    bool operator==(const AllergenReport&) const = default;
};

// Ingredients assumed to be on hand even when not scanned (salt, water...).
// Empty by default: recipes may use only what the user has.
class StaplesPolicy {
public:
    StaplesPolicy() = default;
    explicit StaplesPolicy(const std::vector<std::string>& names);

    bool allows(std::string_view canonical_key) const;
    const std::set<std::string, std::less<>>& allowed_keys() const noexcept { return keys_; }

private:
    std::set<std::string, std::less<>> keys_;
};

ValidationReport validate_recipe(const Recipe& recipe, std::span<const Ingredient> pantry,
                                 const StaplesPolicy& staples);

// Case-insensitive, whitespace-normalized containment in either direction
// between each allergy and (a) the declared allergens, (b) the required
// ingredient keys. Errs on the side of flagging.
AllergenReport check_allergens(const Recipe& recipe, const UserProfile& profile);

std::vector<RequiredIngredient> shopping_list(const Recipe& recipe,
                                              std::span<const Ingredient> pantry);

struct RatedRecipe {
    std::string title;
    int stars = 0;
};

std::vector<RatedRecipe> ratings_of(const PantrySession& session);

// Rendered {profile} block for the recipe prompt.
std::string describe_profile(const UserProfile& profile, std::span<const RatedRecipe> ratings);

struct RecipeRejection {
    Recipe recipe;
    ValidationReport validation;
    AllergenReport allergens;
};

struct GenerationResult {
    PantrySession session;
    std::vector<Recipe> recipes;
    std::vector<RecipeRejection> rejected;
    // How many fewer recipes than requested survived validation.
    int shortfall = 0;
};

class NoValidRecipesError : public Error {
public:
    explicit NoValidRecipesError(std::vector<RecipeRejection> rejections);
    const std::vector<RecipeRejection>& rejections() const noexcept { return rejections_; }

private:
    std::vector<RecipeRejection> rejections_;
};

struct GenerationRequest {
    int count = 3;
    StaplesPolicy staples;
    // Ratings to feed back into the prompt; usually every rating the profile
    // has given so far.
    std::vector<RatedRecipe> past_ratings;
    llm::CallOptions call;
};

// Asks the model for recipes, then re-checks every one locally: recipes that
// use anything outside pantry + staples, lack core nutrition, are structurally
// incomplete, or hit an allergy are discarded and reported. Survivors (at most
// `count`, in model order) are appended to the session's offered recipes.
GenerationResult generate_recipes(const llm::Gateway& gateway, PantrySession session,
                                  const UserProfile& profile, const GenerationRequest& request);

PantrySession rate_recipe(PantrySession session, std::string_view recipe_id, int stars);

} // namespace souschef::recipes
