#include "souschef/error.hpp"

namespace souschef {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_name: return "invalid_name";
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::invalid_state: return "invalid_state";
    case ErrorKind::template_error: return "template_error";
    case ErrorKind::timeout: return "timeout";
    case ErrorKind::rate_limit_exhausted: return "rate_limit_exhausted";
    case ErrorKind::provider_rejection: return "provider_rejection";
    case ErrorKind::no_payload: return "no_payload";
    case ErrorKind::schema_violation: return "schema_violation";
    case ErrorKind::invalid_step: return "invalid_step";
    case ErrorKind::no_valid_recipes: return "no_valid_recipes";
    case ErrorKind::missing_key: return "missing_key";
    case ErrorKind::incomplete_data: return "incomplete_data";
    case ErrorKind::load_error: return "load_error";
    case ErrorKind::setup_error: return "setup_error";
    case ErrorKind::io_error: return "io_error";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, std::string message, std::string subject, int attempts)
    : std::runtime_error(std::move(message)), kind_(kind), subject_(std::move(subject)),
      attempts_(attempts) {}

} // namespace souschef
