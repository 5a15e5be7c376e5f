#pragma once

#include "souschef/core/model.hpp"

#include <string>
#include <vector>

namespace souschef {

// Plain-text rendering of a recipe: title, ingredient list with amounts and
// numbered steps. Used wherever a recipe is embedded in a prompt.
std::string describe_recipe(const Recipe& recipe);

std::string join(const std::vector<std::string>& items, std::string_view separator);

// Canonical keys of the pantry in pantry order, joined by ", ".
std::string pantry_keys(const PantrySession& session);

} // namespace souschef
