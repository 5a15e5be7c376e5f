#pragma once

#include "souschef/i18n/language.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace souschef::llm {

enum class TemplateId { detect_ingredients, generate_recipes, step_feedback, assistant_chat, translate };

std::string_view to_string(TemplateId id);
std::optional<TemplateId> parse_template_id(std::string_view s);
// Templates that must carry an image.
bool takes_image(TemplateId id);

struct ImageData {
    std::string bytes;
    std::string mime_type;
    int width_px = 0;
    int height_px = 0;
};

struct LlmRequest {
    TemplateId template_id = TemplateId::assistant_chat;
    std::string system_instruction;
    std::string user_text;
    std::optional<ImageData> image;
    Language language = Language::en;
    int max_output_tokens = 2048;
    // Routing hint for the mock provider; the live provider ignores it.
    std::optional<std::string> fixture_tag;

    // Throws Error{invalid_input} when the image/template pairing or the token
    // budget is wrong.
    void validate() const;
};

enum class ProviderKind { live, mock };

std::string_view to_string(ProviderKind kind);

struct LlmResponse {
    std::string raw_text;
    ProviderKind provider = ProviderKind::mock;
    std::int64_t latency_ms = 0;
};

} // namespace souschef::llm
