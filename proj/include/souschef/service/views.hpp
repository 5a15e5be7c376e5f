#pragma once

// Wire shapes of the HTTP API responses. docs/api.md describes each one.

#include "souschef/core/serialize.hpp"
#include "souschef/error.hpp"
#include "souschef/recipes/engine.hpp"
#include "souschef/service/app.hpp"

namespace souschef::service {

Json pantry_json(const PantrySession& session);
Json scan_json(const ScanOutcome& outcome);
Json validation_json(const recipes::ValidationReport& report);
Json allergen_json(const recipes::AllergenReport& report);
Json rejection_json(const recipes::RecipeRejection& rejection);
Json recipe_batch_json(const RecipeBatch& batch);
Json shopping_list_json(const std::string& recipe_id, const std::vector<RequiredIngredient>& items);

// {"error": {"kind", "message", "subject"?, "attempts"?}}
Json error_json(const Error& error);
int http_status(ErrorKind kind);

} // namespace souschef::service
