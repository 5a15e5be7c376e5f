#include "souschef/assistant/assistant.hpp"

#include "souschef/core/format.hpp"
#include "souschef/error.hpp"
#include "souschef/llm/prompt.hpp"

#include <sstream>

namespace souschef::assistant {

namespace {

std::string trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r\n\f\v");
    return std::string(s.substr(first, last - first + 1));
}

std::string render_history(const std::vector<ChatTurn>& turns) {
    if (turns.empty()) return "(no earlier messages)";
    std::ostringstream ss;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (i) ss << "\n";
        ss << (turns[i].role == Role::user ? "User: " : "Assistant: ") << turns[i].content;
    }
    return ss.str();
}

} // namespace

std::string build_system_instruction(const PantrySession& session, const UserProfile& profile) {
    std::ostringstream ss;
    ss << "You are an experienced sous chef working next to a home cook. Offer practical "
          "cooking advice, suggest dishes, and answer any question about food or cooking. "
          "Keep answers short enough to follow while cooking.\n\n";

    if (session.ingredients.empty()) {
        ss << "Ingredients: no ingredients scanned yet.\n";
    } else {
        ss << "Ingredients the cook has: " << pantry_keys(session) << ".\n";
    }

    if (session.offered_recipes.empty()) {
        ss << "Suggested recipes: none yet.\n";
    } else {
        std::vector<std::string> titles;
        for (const auto& r : session.offered_recipes) titles.push_back(r.title);
        ss << "Suggested recipes: " << join(titles, "; ") << ".\n";
    }

    if (const Recipe* chosen = session.selected()) {
        ss << "The cook is making this recipe:\n" << describe_recipe(*chosen);
    } else {
        ss << "No recipe has been selected yet.\n";
    }

    auto or_none = [](const std::vector<std::string>& v) {
        return v.empty() ? std::string("none") : join(v, ", ");
    };
    ss << "Dietary restrictions: " << or_none(profile.dietary_restrictions) << ".\n";
    ss << "Allergies: " << or_none(profile.allergies) << ".\n";
    ss << "Favorite cuisines: " << or_none(profile.favorite_cuisines) << ".\n";
    ss << "Cooking level: " << profile.cooking_level << " of 5.\n\n";
    ss << "Always answer in " << english_name(profile.language) << ".";
    return ss.str();
}

std::vector<ChatTurn> truncate_history(std::span<const ChatTurn> history, std::size_t budget) {
    if (budget < 2) throw Error(ErrorKind::precondition, "history budget must be at least 2", "budget");
    std::size_t start = history.size() > budget ? history.size() - budget : 0;
    while (start < history.size() && history[start].role == Role::assistant) ++start;
    return {history.begin() + static_cast<std::ptrdiff_t>(start), history.end()};
}

ChatTurn ask(const llm::Gateway& gateway, PantrySession& session, const UserProfile& profile,
             const std::string& user_text, Modality modality, const AskOptions& options) {
    std::string message = trim(user_text);
    if (message.empty()) throw Error(ErrorKind::invalid_input, "message is blank", "text");

    auto prior = truncate_history(session.chat_history, options.history_budget);

    llm::LlmRequest request;
    request.template_id = llm::TemplateId::assistant_chat;
    request.system_instruction = build_system_instruction(session, profile);
    request.user_text = llm::render_prompt(request.template_id,
                                           {{"history", render_history(prior)}, {"message", message}});
    request.language = profile.language;
    request.max_output_tokens = options.call.max_output_tokens;
    request.fixture_tag = options.call.fixture_tag;

    session.chat_history.push_back(ChatTurn{Role::user, modality, message, now(), false});
    std::string reply;
    try {
        reply = trim(gateway.complete(request).raw_text);
        if (reply.empty()) throw Error(ErrorKind::provider_rejection, "assistant reply was empty");
    } catch (...) {
        session.chat_history.back().unanswered = true;
        throw;
    }
    ChatTurn turn{Role::assistant, modality, std::move(reply), now(), false};
    session.chat_history.push_back(turn);
    return turn;
}

} // namespace souschef::assistant
