#pragma once

#include "souschef/core/model.hpp"
#include "souschef/llm/gateway.hpp"
#include "souschef/llm/providers.hpp"

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace souschef::testing {

inline std::filesystem::path data_dir() { return SOUSCHEF_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return data_dir() / "fixtures"; }
inline std::filesystem::path snapshot_path(const std::string& name) {
    return fixture_dir() / "snapshots" / name;
}

inline llm::Gateway mock_gateway() {
    return llm::Gateway(std::make_shared<llm::MockProvider>(fixture_dir()));
}

inline PantrySession session_with(const std::vector<std::string>& names) {
    PantrySession s;
    s.id = "s-test";
    s.profile_id = "p-test";
    s.created_at = from_epoch_ms(1'700'000'000'000);
    for (const auto& n : names) {
        s.ingredients.emplace_back(n, IngredientSource::scanned, s.created_at);
    }
    return s;
}

inline Recipe recipe_with(std::string id, const std::vector<std::string>& required,
                          std::size_t steps = 2) {
    Recipe r;
    r.id = std::move(id);
    r.title = "Recipe " + r.id;
    r.cuisine = "Test";
    r.servings = 2;
    for (const auto& name : required) r.required.push_back({canonicalize(name), name, "1 cup"});
    for (std::size_t i = 0; i < steps; ++i) r.steps.push_back("Step " + std::to_string(i + 1));
    r.nutrition.calories = 100;
    r.nutrition.fat_g = 1;
    r.nutrition.carbohydrates_g = 10;
    r.nutrition.protein_g = 5;
    return r;
}

// A fresh temporary directory, removed with everything in it on scope exit.
class ScratchDir {
public:
    ScratchDir() {
        path_ = std::filesystem::temp_directory_path() / ("souschef-test-" + make_id("d"));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Printable ASCII plus assorted whitespace and a few multi-byte sequences.
inline std::string random_text(std::mt19937& rng, std::size_t max_len) {
    static const std::vector<std::string> pieces{
        "a", "B", "z", "Q", " ", "  ", "\t", "\n", "-", "'", "1", "é", "ñ", "火", "oil", "Tomato"};
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::string out;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) out += pieces[pick(rng)];
    return out;
}

} // namespace souschef::testing
