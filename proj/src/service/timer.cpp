#include "souschef/service/timer.hpp"

#include "souschef/error.hpp"

#include <algorithm>

namespace souschef::service {

std::string_view to_string(TimerState state) {
    switch (state) {
    case TimerState::running: return "running";
    case TimerState::paused: return "paused";
    case TimerState::expired: return "expired";
    }
    return "unknown";
}

std::optional<TimerState> parse_timer_state(std::string_view s) {
    for (TimerState state : {TimerState::running, TimerState::paused, TimerState::expired}) {
        if (to_string(state) == s) return state;
    }
    return std::nullopt;
}

int Timer::remaining_s() const noexcept {
    return static_cast<int>((remaining_ms + 999) / 1000);
}

Timer start_timer(std::string id, std::string session_id, std::string label, int duration_s,
                  Timestamp at) {
    if (label.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorKind::invalid_input, "timer label is blank", "label");
    }
    if (duration_s <= 0) {
        throw Error(ErrorKind::invalid_input, "timer duration must be positive", "duration_s");
    }
    Timer t;
    t.id = std::move(id);
    t.session_id = std::move(session_id);
    t.label = std::move(label);
    t.duration_s = duration_s;
    t.started_at = at;
    t.state = TimerState::running;
    t.remaining_ms = std::int64_t{duration_s} * 1000;
    t.anchor = at;
    return t;
}

Timer advance(Timer timer, Timestamp at) {
    if (timer.state != TimerState::running) return timer;
    std::int64_t elapsed = std::max<std::int64_t>(0, (at - timer.anchor).count());
    timer.remaining_ms = std::max<std::int64_t>(0, timer.remaining_ms - elapsed);
    timer.anchor = std::max(timer.anchor, at);
    if (timer.remaining_ms == 0) timer.state = TimerState::expired;
    return timer;
}

Timer pause(Timer timer, Timestamp at) {
    timer = advance(std::move(timer), at);
    if (timer.state != TimerState::running) {
        throw Error(ErrorKind::invalid_state,
                    "cannot pause a " + std::string(to_string(timer.state)) + " timer", timer.id);
    }
    timer.state = TimerState::paused;
    return timer;
}

Timer resume(Timer timer, Timestamp at) {
    if (timer.state != TimerState::paused) {
        throw Error(ErrorKind::invalid_state,
                    "cannot resume a " + std::string(to_string(timer.state)) + " timer", timer.id);
    }
    timer.state = TimerState::running;
    timer.anchor = at;
    return timer;
}

void to_json(Json& j, const Timer& t) {
    j = Json{{"id", t.id},
             {"session_id", t.session_id},
             {"label", t.label},
             {"duration_s", t.duration_s},
             {"started_at", to_epoch_ms(t.started_at)},
             {"state", to_string(t.state)},
             {"remaining_s", t.remaining_s()},
             {"remaining_ms", t.remaining_ms},
             {"anchor", to_epoch_ms(t.anchor)}};
}

void from_json(const Json& j, Timer& t) {
    t.id = required_field<std::string>(j, "id");
    t.session_id = required_field<std::string>(j, "session_id");
    t.label = required_field<std::string>(j, "label");
    t.duration_s = required_field<int>(j, "duration_s");
    t.started_at = from_epoch_ms(required_field<std::int64_t>(j, "started_at"));
    auto state = required_field<std::string>(j, "state");
    auto parsed = parse_timer_state(state);
    if (!parsed) throw Error(ErrorKind::schema_violation, "unknown timer state '" + state + "'", "state");
    t.state = *parsed;
    t.remaining_ms = required_field<std::int64_t>(j, "remaining_ms");
    t.anchor = from_epoch_ms(required_field<std::int64_t>(j, "anchor"));
    if (t.duration_s <= 0 || t.remaining_ms < 0 || t.remaining_ms > std::int64_t{t.duration_s} * 1000) {
        throw Error(ErrorKind::schema_violation, "timer remaining time out of range", "remaining_ms");
    }
    if ((t.state == TimerState::expired) != (t.remaining_ms == 0)) {
        throw Error(ErrorKind::schema_violation, "expired exactly when nothing remains", "state");
    }
}

} // namespace souschef::service
