#pragma once

#include "souschef/core/model.hpp"
#include "souschef/core/serialize.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace souschef::service {

enum class TimerState { running, paused, expired };

std::string_view to_string(TimerState state);
std::optional<TimerState> parse_timer_state(std::string_view s);

// A countdown tied to a session. Time is tracked in milliseconds against an
// anchor: while running, remaining = remaining_ms - (now - anchor); while
// paused or expired, remaining_ms is the frozen value.
struct Timer {
    std::string id;
    std::string session_id;
    std::string label;
    int duration_s = 0;
    Timestamp started_at{};
    TimerState state = TimerState::running;
    std::int64_t remaining_ms = 0;
    Timestamp anchor{};

    // Whole seconds left, rounded up, as of the last advance().
    int remaining_s() const noexcept;

    bool operator==(const Timer&) const = default;
};

// Throws Error{invalid_input} for a blank label or non-positive duration.
Timer start_timer(std::string id, std::string session_id, std::string label, int duration_s,
                  Timestamp at);

// Brings a running timer up to `at` and expires it when nothing is left.
// Paused and expired timers are returned unchanged. A clock that steps
// backwards never adds time.
Timer advance(Timer timer, Timestamp at);

// Both advance first. pause() needs a running timer, resume() a paused one;
// anything else throws Error{invalid_state}.
Timer pause(Timer timer, Timestamp at);
Timer resume(Timer timer, Timestamp at);

void to_json(Json& j, const Timer& t);
void from_json(const Json& j, Timer& t);

} // namespace souschef::service
