#pragma once

#include "souschef/llm/request.hpp"

#include <memory>
#include <optional>
#include <string>

namespace souschef::llm {

// Per-call knobs that callers thread through to the request.
struct CallOptions {
    std::optional<std::string> fixture_tag;
    int max_output_tokens = 2048;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual LlmResponse complete(const LlmRequest& request) const = 0;
};

// Shareable front door to a provider. Validates each request and forwards it;
// holds no per-request state so concurrent calls are independent.
class Gateway {
public:
    explicit Gateway(std::shared_ptr<const Provider> provider);

    LlmResponse complete(const LlmRequest& request) const;

private:
    std::shared_ptr<const Provider> provider_;
};

} // namespace souschef::llm
