#include "doctest.h"
#include "helpers.hpp"

#include "souschef/assistant/assistant.hpp"
#include "souschef/core/format.hpp"
#include "souschef/error.hpp"

#include <random>

using namespace souschef;
using namespace souschef::assistant;

namespace {

// Records requests and answers with a fixed reply.
class EchoProvider final : public llm::Provider {
public:
    explicit EchoProvider(std::string reply) : reply_(std::move(reply)) {}
    llm::LlmResponse complete(const llm::LlmRequest& request) const override {
        requests.push_back(request);
        return {reply_, llm::ProviderKind::mock, 0};
    }
    mutable std::vector<llm::LlmRequest> requests;

private:
    std::string reply_;
};

ChatTurn turn(Role role, std::string text) { return {role, Modality::text, std::move(text), from_epoch_ms(0), false}; }

// The longest suffix of at most `budget` turns that is empty or starts with a
// user turn, found by trying every suffix.
std::vector<ChatTurn> brute_force_truncate(const std::vector<ChatTurn>& h, std::size_t budget) {
    std::vector<ChatTurn> best;
    for (std::size_t start = 0; start <= h.size(); ++start) {
        std::size_t len = h.size() - start;
        if (len > budget) continue;
        if (len > 0 && h[start].role != Role::user) continue;
        if (len > best.size()) best.assign(h.begin() + static_cast<std::ptrdiff_t>(start), h.end());
    }
    return best;
}

} // namespace

TEST_CASE("system instruction with an empty session") {
    UserProfile profile;
    std::string text = build_system_instruction(testing::session_with({}), profile);
    CHECK(text.find("sous chef") != std::string::npos);
    CHECK(text.find("Ingredients: no ingredients scanned yet.") != std::string::npos);
    CHECK(text.find("No recipe has been selected yet.") != std::string::npos);
    CHECK(text.ends_with("Always answer in English."));
}

TEST_CASE("system instruction carries pantry, recipes, profile and language") {
    auto s = testing::session_with({"Tomato", "Egg"});
    s.offered_recipes = {testing::recipe_with("r1", {"egg"}), testing::recipe_with("r2", {"tomato"})};
    s.selected_recipe = "r2";
    UserProfile profile;
    profile.allergies = {"peanut"};
    profile.dietary_restrictions = {"vegetarian"};
    profile.favorite_cuisines = {"Thai"};
    profile.cooking_level = 4;
    profile.language = Language::fa;

    std::string text = build_system_instruction(s, profile);
    CHECK(text.find("tomato, egg") != std::string::npos);
    CHECK(text.find("Recipe r1; Recipe r2") != std::string::npos);
    CHECK(text.find(describe_recipe(s.offered_recipes[1])) != std::string::npos);
    CHECK(text.find("Allergies: peanut.") != std::string::npos);
    CHECK(text.find("Dietary restrictions: vegetarian.") != std::string::npos);
    CHECK(text.find("Favorite cuisines: Thai.") != std::string::npos);
    CHECK(text.find("Cooking level: 4 of 5.") != std::string::npos);
    CHECK(text.ends_with("Always answer in Persian."));
}

TEST_CASE("history truncation examples") {
    std::vector<ChatTurn> h{turn(Role::user, "1"), turn(Role::assistant, "2"), turn(Role::user, "3"),
                            turn(Role::assistant, "4"), turn(Role::user, "5")};
    CHECK(truncate_history(h, 20) == h);
    CHECK(truncate_history(h, 3) == std::vector<ChatTurn>(h.begin() + 2, h.end()));
    // the reply "4" can't be kept without its question "3"
    CHECK(truncate_history(h, 2) == std::vector<ChatTurn>{h[4]});
    CHECK(truncate_history({}, 2).empty());
    CHECK_THROWS_AS(truncate_history(h, 1), Error);
}

TEST_CASE("history truncation agrees with exhaustive search") {
    std::mt19937 rng(41);
    for (int n = 0; n < 5000; ++n) {
        std::vector<ChatTurn> h;
        for (int i = 0, len = static_cast<int>(rng() % 14); i < len; ++i) {
            // mostly alternating, with the occasional unanswered user turn
            Role r = (i % 2 == 0 || rng() % 5 == 0) ? Role::user : Role::assistant;
            h.push_back(turn(r, std::to_string(i)));
        }
        std::size_t budget = 2 + rng() % 10;
        auto got = truncate_history(h, budget);
        CHECK(got == brute_force_truncate(h, budget));
        CHECK(got.size() <= budget);
        if (!got.empty()) CHECK(got.front().role == Role::user);
    }
}

TEST_CASE("text and voice take the same path") {
    auto provider = std::make_shared<EchoProvider>("Chop it finely.");
    llm::Gateway gateway(provider);
    UserProfile profile;
    auto s1 = testing::session_with({"onion"});
    auto s2 = s1;

    auto a = ask(gateway, s1, profile, "How do I dice an onion?", Modality::text);
    auto b = ask(gateway, s2, profile, "How do I dice an onion?", Modality::voice_transcript);
    REQUIRE(provider->requests.size() == 2);
    CHECK(provider->requests[0].user_text == provider->requests[1].user_text);
    CHECK(provider->requests[0].system_instruction == provider->requests[1].system_instruction);
    CHECK(a.content == b.content);
    CHECK(a.modality == Modality::text);
    CHECK(b.modality == Modality::voice_transcript);
    REQUIRE(s2.chat_history.size() == 2);
    CHECK(s2.chat_history[0].modality == Modality::voice_transcript);
    CHECK(s2.chat_history[0].role == Role::user);
    CHECK(s2.chat_history[1].role == Role::assistant);
}

TEST_CASE("earlier turns are sent within the history budget") {
    auto provider = std::make_shared<EchoProvider>("ok");
    llm::Gateway gateway(provider);
    auto s = testing::session_with({"egg"});
    for (int i = 0; i < 6; ++i) ask(gateway, s, {}, "question " + std::to_string(i), Modality::text);
    AskOptions opts;
    opts.history_budget = 4;
    ask(gateway, s, {}, "last", Modality::text, opts);
    const auto& text = provider->requests.back().user_text;
    CHECK(text.find("User: question 4") != std::string::npos);
    CHECK(text.find("User: question 5") != std::string::npos);
    CHECK(text.find("question 3") == std::string::npos);
    CHECK(text.find("last") != std::string::npos);
}

TEST_CASE("blank input changes nothing") {
    auto gateway = testing::mock_gateway();
    auto s = testing::session_with({"egg"});
    try {
        ask(gateway, s, {}, "  \n ", Modality::text);
        FAIL("expected invalid_input");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_input);
    }
    CHECK(s.chat_history.empty());
}

TEST_CASE("provider failure keeps the question marked unanswered") {
    auto gateway = testing::mock_gateway();
    auto s = testing::session_with({"egg"});
    AskOptions opts;
    opts.call.fixture_tag = "missing_reply";
    CHECK_THROWS_AS(ask(gateway, s, {}, "Anything?", Modality::text, opts), Error);
    REQUIRE(s.chat_history.size() == 1);
    CHECK(s.chat_history[0].unanswered);
    CHECK(s.chat_history[0].content == "Anything?");
}

TEST_CASE("mock fixture reply") {
    auto gateway = testing::mock_gateway();
    auto s = testing::session_with({"tomato", "egg", "onion", "flour", "milk"});
    AskOptions opts;
    opts.call.fixture_tag = "suggest_reply";
    auto reply = ask(gateway, s, {}, "What can I make?", Modality::text, opts);
    CHECK(reply.content.find("omelette") != std::string::npos);
}
