#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace souschef {

enum class ErrorKind {
    invalid_name,
    invalid_input,
    precondition,
    not_found,
    out_of_range,
    invalid_state,
    template_error,
    timeout,
    rate_limit_exhausted,
    provider_rejection,
    no_payload,
    schema_violation,
    invalid_step,
    no_valid_recipes,
    missing_key,
    incomplete_data,
    load_error,
    setup_error,
    io_error,
};

std::string_view to_string(ErrorKind kind);

// Every failure surfaced by the library is an Error. `subject` names the thing
// the error is about (placeholder, field path, key, participant/question...).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, std::string subject = {}, int attempts = 0);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& subject() const noexcept { return subject_; }
    // Number of provider attempts made before giving up (gateway errors only).
    int attempts() const noexcept { return attempts_; }

private:
    ErrorKind kind_;
    std::string subject_;
    int attempts_;
};

} // namespace souschef
