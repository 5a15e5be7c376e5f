#include "doctest.h"
#include "helpers.hpp"

#include "souschef/core/serialize.hpp"
#include "souschef/error.hpp"

#include <random>

using namespace souschef;
using souschef::testing::random_text;

namespace {

bool is_blank(const std::string& s) { return s.find_first_not_of(" \t\n\r\f\v") == std::string::npos; }

template <class T>
T round_trip(const T& value) {
    Json encoded = value;
    return Json::parse(encoded.dump()).get<T>();
}

std::string word(std::mt19937& rng) {
    static const std::vector<std::string> words{"tomato", "Olive Oil", "egg", "basil",
                                                "peanut butter", "Milk", "flour", "salt"};
    return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
}

Recipe random_recipe(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> small(0, 4);
    Recipe r;
    r.id = "r" + std::to_string(n);
    r.title = "Dish " + std::to_string(n);
    r.cuisine = small(rng) ? "Italian" : "";
    r.servings = 1 + small(rng);
    for (int i = 0, k = 1 + small(rng); i < k; ++i) {
        auto name = word(rng);
        r.required.push_back({canonicalize(name), name, std::to_string(i + 1) + " cups"});
    }
    for (int i = 0, k = small(rng); i < k; ++i) r.steps.push_back("do thing " + std::to_string(i));
    if (small(rng)) r.nutrition.calories = 12.5 * small(rng);
    if (small(rng)) r.nutrition.fat_g = 0.1 * small(rng);
    r.nutrition.carbohydrates_g = 3;
    if (small(rng) > 2) r.nutrition.fiber_g = 1.25;
    r.nutrition.protein_g = small(rng);
    if (small(rng) > 1) r.nutrition.vitamins["vitamin c"] = "10% DV";
    if (small(rng) > 1) r.allergens.push_back("milk");
    if (small(rng) > 2) r.rating = 1 + small(rng);
    return r;
}

} // namespace

TEST_CASE("canonicalize normalizes case and whitespace only") {
    CHECK(canonicalize("  Tomato ") == "tomato");
    CHECK(canonicalize("Olive   Oil") == "olive oil");
    CHECK(canonicalize("tomato") == "tomato");
    CHECK(canonicalize("\tPeanut\n Butter\r") == "peanut butter");
    CHECK(canonicalize("Tomatoes") == "tomatoes");
    CHECK(canonicalize("JALAPEÑO") == "jalapeÑo");
}

TEST_CASE("canonicalize rejects blank names") {
    for (const char* blank : {"", " ", "\t\n", "   \r  "}) {
        try {
            canonicalize(blank);
            FAIL("expected invalid_name");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_name);
        }
    }
}

TEST_CASE("canonicalize is idempotent and yields single-spaced lowercase keys") {
    std::mt19937 rng(7);
    int checked = 0;
    for (int i = 0; i < 5000; ++i) {
        std::string input = random_text(rng, 12);
        if (is_blank(input)) continue;
        std::string key = canonicalize(input);
        CHECK(canonicalize(key) == key);
        CHECK(!key.empty());
        CHECK(key.front() != ' ');
        CHECK(key.back() != ' ');
        CHECK(key.find("  ") == std::string::npos);
        for (char c : key) CHECK(!(c >= 'A' && c <= 'Z'));
        ++checked;
    }
    CHECK(checked > 4000);
}

TEST_CASE("ingredient key always derives from its display name") {
    Ingredient i("  Olive  OIL ", IngredientSource::manual, from_epoch_ms(5), "2 tbsp");
    CHECK(i.canonical_key() == "olive oil");
    CHECK(i.display_name() == "  Olive  OIL ");
    CHECK_THROWS_AS(Ingredient(" ", IngredientSource::scanned, now()), Error);
}

TEST_CASE("norm box invariants") {
    CHECK(NormBox{0, 0, 1000, 1000}.valid());
    CHECK_FALSE(NormBox{10, 0, 10, 5}.valid());
    CHECK_FALSE(NormBox{0, 0, 1001, 5}.valid());
    CHECK_FALSE(NormBox{-1, 0, 10, 5}.valid());
    CHECK_THROWS_AS(NormBox::checked(700, 500, 650, 580), Error);
}

TEST_CASE("every domain type survives an encode/decode round trip") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coord(0, 999);
    for (int n = 0; n < 300; ++n) {
        int y0 = coord(rng), x0 = coord(rng);
        NormBox box{y0, x0, y0 + 1 + coord(rng) % (1000 - y0), x0 + 1 + coord(rng) % (1000 - x0)};
        REQUIRE(box.valid());
        DetectionLabel label{word(rng), box, n % 2 ? std::optional<double>(0.25 * (n % 5)) : std::nullopt};
        CHECK(round_trip(label) == label);

        Recipe recipe = random_recipe(rng, n);
        CHECK(round_trip(recipe) == recipe);

        UserProfile profile;
        profile.id = "p" + std::to_string(n);
        profile.allergies = {word(rng)};
        profile.cooking_level = 1 + n % 5;
        profile.language = all_languages[n % all_languages.size()];
        CHECK(round_trip(profile) == profile);

        PantrySession session = souschef::testing::session_with({"tomato", "egg"});
        session.ingredients.emplace_back("Basil", IngredientSource::manual, from_epoch_ms(n), "a bunch");
        session.offered_recipes = {recipe, random_recipe(rng, n + 1000)};
        if (n % 2) session.selected_recipe = recipe.id;
        session.chat_history.push_back({Role::user, Modality::voice_transcript, "hi", from_epoch_ms(n), n % 3 == 0});
        session.chat_history.push_back({Role::assistant, Modality::text, "hello", from_epoch_ms(n + 1), false});
        CHECK(round_trip(session) == session);

        StepFeedback feedback{n % 7, n % 2 ? Verdict::correct : Verdict::needs_adjustment, "smaller pieces"};
        CHECK(round_trip(feedback) == feedback);

        LikertResponse response{"p" + std::to_string(n), 1 + n % 3,
                                n % 2 ? SurveySection::background : SurveySection::usability, "q1", 1 + n % 5};
        CHECK(round_trip(response) == response);

        Ingredient ingredient(word(rng), n % 2 ? IngredientSource::scanned : IngredientSource::manual,
                              from_epoch_ms(1'000 * n));
        CHECK(round_trip(ingredient) == ingredient);
    }
}

TEST_CASE("serialized field names are the documented snake_case names") {
    Recipe r = souschef::testing::recipe_with("r1", {"Tomato"});
    Json j = r;
    for (const char* key : {"id", "title", "cuisine", "servings", "required", "steps", "nutrition", "allergens"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["required"][0] == Json{{"canonical_key", "tomato"}, {"display_name", "Tomato"}, {"amount", "1 cup"}});
    Json n = j["nutrition"];
    for (const char* key : {"calories", "fat_g", "carbohydrates_g", "protein_g", "vitamins"}) {
        CHECK(n.contains(key));
    }
}

TEST_CASE("decode errors carry the offending field path") {
    Json session = souschef::testing::session_with({"tomato"});
    Json recipe = souschef::testing::recipe_with("r1", {"egg"});
    recipe["nutrition"]["calories"] = "lots";
    session["offered_recipes"] = Json::array({souschef::testing::recipe_with("r0", {"egg"}), recipe});
    try {
        session.get<PantrySession>();
        FAIL("expected schema violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::schema_violation);
        CHECK(e.subject() == "offered_recipes[1].nutrition.calories");
    }
}

TEST_CASE("decoding enforces value invariants") {
    CHECK_THROWS_AS((Json{{"participant_id", "a"}, {"round", 1}, {"section", "usability"},
                          {"question_id", "q"}, {"score", 6}}.get<LikertResponse>()),
                    Error);
    CHECK_THROWS_AS((Json{{"step_index", 0}, {"verdict", "needs_adjustment"}, {"explanation", ""}}
                         .get<StepFeedback>()),
                    Error);
    CHECK_THROWS_AS((Json{{"cooking_level", 9}}.get<UserProfile>()), Error);
    CHECK_THROWS_AS((Json{{"language", "de"}}.get<UserProfile>()), Error);

    Json session = souschef::testing::session_with({"tomato", "Tomato "});
    CHECK_THROWS_AS(session.get<PantrySession>(), Error);

    Json dangling = souschef::testing::session_with({"egg"});
    dangling["selected_recipe"] = "nope";
    CHECK_THROWS_AS(dangling.get<PantrySession>(), Error);

    Json ingredient{{"display_name", "Egg"}, {"canonical_key", "eggs"}, {"source", "scanned"}, {"first_seen", 0}};
    CHECK_THROWS_AS(ingredient.get<Ingredient>(), Error);
}

TEST_CASE("pantry session lookups") {
    auto s = souschef::testing::session_with({"Tomato", "egg"});
    s.offered_recipes.push_back(souschef::testing::recipe_with("r1", {"egg"}));
    CHECK(s.has_ingredient("tomato"));
    CHECK_FALSE(s.has_ingredient("Tomato"));
    CHECK(s.find_recipe("r1") != nullptr);
    CHECK(s.selected() == nullptr);
    s.selected_recipe = "r1";
    CHECK(s.selected()->id == "r1");
}
