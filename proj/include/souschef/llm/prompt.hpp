#pragma once

#include "souschef/llm/request.hpp"

#include <map>
#include <string>
#include <vector>

namespace souschef::llm {

using PromptContext = std::map<std::string, std::string, std::less<>>;

// A template body with `{name}` placeholders, where name is [a-z_]+. Any other
// brace (JSON examples inside the body) is literal text.
struct PromptTemplate {
    TemplateId template_id;
    std::string body;

    // Placeholder names in order of first appearance.
    std::vector<std::string> placeholders() const;
};

const PromptTemplate& prompt_template(TemplateId id);

// Substitutes every placeholder in one pass; substituted text is not rescanned.
// Throws Error{template_error} naming the first placeholder missing from context.
std::string render(const PromptTemplate& tmpl, const PromptContext& context);
std::string render_prompt(TemplateId id, const PromptContext& context);

} // namespace souschef::llm
