#pragma once

#include "souschef/llm/gateway.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace souschef::llm {

// Replays fixture files named `{template_id}__{tag}` from a directory. The tag
// comes from the request's fixture_tag, else from the snapshot whose bytes
// match `snapshots/{tag}.*`, else "default". Responses are the file bytes
// verbatim, so identical requests always produce identical text.
class MockProvider final : public Provider {
public:
    explicit MockProvider(std::filesystem::path fixture_dir);

    LlmResponse complete(const LlmRequest& request) const override;

    // Tag the provider would use for this request.
    std::string resolve_tag(const LlmRequest& request) const;
    std::filesystem::path fixture_path(TemplateId id, const std::string& tag) const;
    const std::filesystem::path& fixture_dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
};

struct LiveConfig {
    // Full URL of a Gemini-style generateContent endpoint.
    std::string endpoint;
    std::string api_key;
    // Budget for one complete() call, retries and backoff included. Each
    // attempt gets whatever is left of it.
    std::chrono::milliseconds request_timeout{60'000};
    int max_attempts = 3;
    std::vector<std::chrono::milliseconds> backoff{std::chrono::milliseconds{500},
                                                   std::chrono::milliseconds{1000},
                                                   std::chrono::milliseconds{2000}};
    // Injected so tests can observe the schedule without waiting.
    std::function<void(std::chrono::milliseconds)> sleep;
};

// HTTPS client for a Gemini-style multimodal endpoint. Connection failures,
// HTTP 429 and 5xx are retried; other 4xx responses fail immediately.
class LiveProvider final : public Provider {
public:
    explicit LiveProvider(LiveConfig config);

    LlmResponse complete(const LlmRequest& request) const override;

    // Wire body for a request (exposed for tests).
    static std::string encode_body(const LlmRequest& request);
    // Concatenated candidate text, or Error{provider_rejection}.
    static std::string decode_body(const std::string& body);

private:
    LiveConfig config_;
    std::string base_url_;
    std::string path_;
};

} // namespace souschef::llm
