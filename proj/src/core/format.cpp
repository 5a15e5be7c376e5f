#include "souschef/core/format.hpp"

#include <sstream>

namespace souschef {

std::string join(const std::vector<std::string>& items, std::string_view separator) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += separator;
        out += items[i];
    }
    return out;
}

std::string describe_recipe(const Recipe& recipe) {
    std::ostringstream ss;
    ss << recipe.title;
    if (!recipe.cuisine.empty()) ss << " (" << recipe.cuisine << ")";
    ss << ", serves " << recipe.servings << "\n";
    ss << "Ingredients:\n";
    for (const auto& item : recipe.required) {
        ss << "- " << item.amount << " " << item.display_name << "\n";
    }
    ss << "Steps:\n";
    for (std::size_t i = 0; i < recipe.steps.size(); ++i) {
        ss << i + 1 << ". " << recipe.steps[i] << "\n";
    }
    return ss.str();
}

std::string pantry_keys(const PantrySession& session) {
    std::vector<std::string> keys;
    keys.reserve(session.ingredients.size());
    for (const auto& ingredient : session.ingredients) keys.push_back(ingredient.canonical_key());
    return join(keys, ", ");
}

} // namespace souschef
