#include "souschef/llm/providers.hpp"

#include "souschef/core/serialize.hpp"
#include "souschef/error.hpp"
#include "souschef/llm/base64.hpp"

#include "httplib.h"

#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>
#include <thread>

namespace souschef::llm {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 start)
        .count();
}

} // namespace

MockProvider::MockProvider(fs::path fixture_dir) : dir_(std::move(fixture_dir)) {}

std::string MockProvider::resolve_tag(const LlmRequest& request) const {
    if (request.fixture_tag && !request.fixture_tag->empty()) return *request.fixture_tag;
    if (request.image) {
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(dir_ / "snapshots", ec)) {
            if (!entry.is_regular_file()) continue;
            if (entry.file_size() != request.image->bytes.size()) continue;
            if (read_file(entry.path()) == request.image->bytes) return entry.path().stem().string();
        }
    }
    return "default";
}

fs::path MockProvider::fixture_path(TemplateId id, const std::string& tag) const {
    return dir_ / (std::string(to_string(id)) + "__" + tag);
}

LlmResponse MockProvider::complete(const LlmRequest& request) const {
    auto start = std::chrono::steady_clock::now();
    std::string tag = resolve_tag(request);
    fs::path path = fixture_path(request.template_id, tag);
    auto text = read_file(path);
    if (!text) {
        throw Error(ErrorKind::provider_rejection,
                    "mock provider has no fixture " + path.filename().string(),
                    path.filename().string(), 1);
    }
    return LlmResponse{std::move(*text), ProviderKind::mock, elapsed_ms(start)};
}

LiveProvider::LiveProvider(LiveConfig config) : config_(std::move(config)) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(config_.endpoint, m, url_re)) {
        throw Error(ErrorKind::invalid_input, "provider endpoint must be an http(s) URL",
                    config_.endpoint);
    }
    base_url_ = m[1];
    path_ = m[2].matched ? std::string(m[2]) : "/";
    if (config_.max_attempts < 1) config_.max_attempts = 1;
    if (!config_.sleep) {
        config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
}

std::string LiveProvider::encode_body(const LlmRequest& request) {
    Json parts = Json::array();
    parts.push_back({{"text", request.user_text}});
    if (request.image) {
        parts.push_back({{"inline_data",
                          {{"mime_type", request.image->mime_type},
                           {"data", base64_encode(request.image->bytes)}}}});
    }
    Json body{{"contents", Json::array({{{"role", "user"}, {"parts", parts}}})},
              {"generationConfig", {{"maxOutputTokens", request.max_output_tokens}}}};
    if (!request.system_instruction.empty()) {
        body["systemInstruction"] = {{"parts", Json::array({{{"text", request.system_instruction}}})}};
    }
    return body.dump();
}

std::string LiveProvider::decode_body(const std::string& body) {
    Json doc = Json::parse(body, nullptr, false);
    if (doc.is_discarded()) {
        throw Error(ErrorKind::provider_rejection, "provider returned malformed JSON");
    }
    std::string text;
    if (doc.contains("candidates") && doc["candidates"].is_array() && !doc["candidates"].empty()) {
        const Json& candidate = doc["candidates"][0];
        if (candidate.contains("content") && candidate["content"].contains("parts")) {
            for (const auto& part : candidate["content"]["parts"]) {
                if (part.contains("text") && part["text"].is_string()) {
                    text += part["text"].get<std::string>();
                }
            }
        }
    }
    if (text.empty()) {
        std::string reason = "provider returned no text";
        if (doc.contains("promptFeedback") && doc["promptFeedback"].contains("blockReason")) {
            reason += " (blocked: " + doc["promptFeedback"]["blockReason"].dump() + ")";
        }
        throw Error(ErrorKind::provider_rejection, reason);
    }
    return text;
}

LlmResponse LiveProvider::complete(const LlmRequest& request) const {
    auto start = std::chrono::steady_clock::now();
    const std::string body = encode_body(request);

    httplib::Client client(base_url_);
    httplib::Headers headers{{"x-goog-api-key", config_.api_key}};
    const auto deadline = start + config_.request_timeout;

    ErrorKind last_kind = ErrorKind::timeout;
    std::string last_message;
    int attempt = 1;
    for (; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1 && !config_.backoff.empty()) {
            std::size_t slot = std::min<std::size_t>(attempt - 2, config_.backoff.size() - 1);
            config_.sleep(config_.backoff[slot]);
        }
        auto left = std::chrono::duration_cast<std::chrono::microseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            last_kind = ErrorKind::timeout;
            last_message = "provider call exceeded its time budget";
            --attempt;
            break;
        }
        auto secs = std::chrono::duration_cast<std::chrono::seconds>(left);
        auto micros = left - secs;
        client.set_connection_timeout(secs.count(), micros.count());
        client.set_read_timeout(secs.count(), micros.count());
        client.set_write_timeout(secs.count(), micros.count());

        auto res = client.Post(path_, headers, body, "application/json");
        if (!res) {
            last_kind = ErrorKind::timeout;
            last_message = "provider unreachable: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            try {
                return LlmResponse{decode_body(res->body), ProviderKind::live, elapsed_ms(start)};
            } catch (const Error& e) {
                throw Error(e.kind(), e.what(), e.subject(), attempt);
            }
        }
        if (res->status == 429) {
            last_kind = ErrorKind::rate_limit_exhausted;
            last_message = "provider rate limit";
            continue;
        }
        if (res->status >= 500) {
            last_kind = ErrorKind::provider_rejection;
            last_message = "provider error HTTP " + std::to_string(res->status);
            continue;
        }
        throw Error(ErrorKind::provider_rejection,
                    "provider rejected request with HTTP " + std::to_string(res->status), "",
                    attempt);
    }
    int made = std::min(attempt, config_.max_attempts);
    throw Error(last_kind, last_message + " after " + std::to_string(made) + " attempts", "", made);
}

} // namespace souschef::llm
