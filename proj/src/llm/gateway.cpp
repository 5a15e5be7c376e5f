#include "souschef/llm/gateway.hpp"

#include "souschef/error.hpp"

#include <array>

namespace souschef::llm {

namespace {

constexpr std::array<std::pair<TemplateId, std::string_view>, 5> template_names{{
    {TemplateId::detect_ingredients, "detect_ingredients"},
    {TemplateId::generate_recipes, "generate_recipes"},
    {TemplateId::step_feedback, "step_feedback"},
    {TemplateId::assistant_chat, "assistant_chat"},
    {TemplateId::translate, "translate"},
}};

} // namespace

std::string_view to_string(TemplateId id) {
    for (const auto& [value, name] : template_names) {
        if (value == id) return name;
    }
    return "unknown";
}

std::optional<TemplateId> parse_template_id(std::string_view s) {
    for (const auto& [value, name] : template_names) {
        if (name == s) return value;
    }
    return std::nullopt;
}

bool takes_image(TemplateId id) {
    return id == TemplateId::detect_ingredients || id == TemplateId::step_feedback;
}

std::string_view to_string(ProviderKind kind) {
    return kind == ProviderKind::live ? "live" : "mock";
}

void LlmRequest::validate() const {
    if (takes_image(template_id) != image.has_value()) {
        throw Error(ErrorKind::invalid_input,
                    std::string("template ") + std::string(to_string(template_id)) +
                        (image ? " must not carry an image" : " requires an image"),
                    "image");
    }
    if (image && (image->bytes.empty() || image->width_px <= 0 || image->height_px <= 0)) {
        throw Error(ErrorKind::invalid_input, "image must be non-empty with positive size", "image");
    }
    if (max_output_tokens <= 0) {
        throw Error(ErrorKind::invalid_input, "max_output_tokens must be positive",
                    "max_output_tokens");
    }
}

Gateway::Gateway(std::shared_ptr<const Provider> provider) : provider_(std::move(provider)) {}

LlmResponse Gateway::complete(const LlmRequest& request) const {
    request.validate();
    return provider_->complete(request);
}

} // namespace souschef::llm
