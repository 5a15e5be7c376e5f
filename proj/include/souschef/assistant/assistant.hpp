#pragma once

#include "souschef/core/model.hpp"
#include "souschef/llm/gateway.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace souschef::assistant {

inline constexpr std::size_t default_history_budget = 20;

// Sous-chef persona plus everything the assistant may rely on: pantry keys,
// offered recipe titles, the selected recipe in full, profile preferences,
// and finally the reply-language directive.
std::string build_system_instruction(const PantrySession& session, const UserProfile& profile);

// The most recent turns, at most `budget`, starting at a user turn. A reply
// is never kept without the question it answers. Throws Error{precondition}
// for budget < 2.
std::vector<ChatTurn> truncate_history(std::span<const ChatTurn> history, std::size_t budget);

struct AskOptions {
    std::size_t history_budget = default_history_budget;
    llm::CallOptions call;
};

// One exchange with the assistant. Text and voice transcripts take the same
// path; only the recorded modality differs. On success both turns are
// appended to the session. On a provider failure the user turn stays in the
// history marked unanswered and the error propagates. Blank input throws
// Error{invalid_input} and leaves the history unchanged.
ChatTurn ask(const llm::Gateway& gateway, PantrySession& session, const UserProfile& profile,
             const std::string& user_text, Modality modality, const AskOptions& options = {});

} // namespace souschef::assistant
