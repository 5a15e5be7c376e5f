#include "souschef/llm/prompt.hpp"

#include "souschef/error.hpp"

#include <algorithm>
#include <array>

namespace souschef::llm {

namespace {

constexpr const char* detect_body = R"(You are looking at a snapshot of a kitchen workspace taken from the user's camera.
Identify every food ingredient that is visible and return the coordinates of each ingredient.
For each ingredient give its name and its bounding box as [y_min, x_min, y_max, x_max],
normalized to a 0-1000 frame where [0, 0] is the top-left corner of the image.
Respond with only a JSON array of objects shaped like
{"name": "<ingredient>", "box": [y_min, x_min, y_max, x_max]}.
If no ingredients are visible, reply in plain text without JSON.
Write ingredient names in {language}.)";

constexpr const char* recipes_body = R"(Return the list of the {count} best recipes the user can cook using only these ingredients:
{ingredients}

User profile:
{profile}

Every recipe must respect the dietary restrictions and must not contain anything the user is allergic to.
Match the cooking level and prefer the favorite cuisines when possible.
For each recipe clearly outline every ingredient and the amount needed, the ordered steps,
nutrition facts per serving (calories, fat, carbohydrates, fiber, protein and notable vitamins)
and every possible allergen.
Write all text in {language}.
Respond with only a JSON array whose elements are shaped like
{"title": "...", "cuisine": "...", "servings": 2,
 "required": [{"name": "...", "amount": "..."}],
 "steps": ["..."],
 "nutrition": {"calories": 0, "fat_g": 0, "carbohydrates_g": 0, "fiber_g": 0, "protein_g": 0,
               "vitamins": {"vitamin c": "..."}},
 "allergens": ["..."]})";

constexpr const char* step_body = R"(The attached snapshot shows the user's workspace while cooking the following recipe:
{recipe}

The step the user has just performed is:
{step}

Check whether the user has done this step correctly and give feedback on their performance.
If something should change, explain exactly what and how.
Write the explanation in {language}.
Respond with only a JSON object shaped like
{"verdict": "correct" or "needs_adjustment", "explanation": "..."})";

constexpr const char* chat_body = R"(Conversation so far:
{history}

The user says:
{message})";

constexpr const char* translate_body = R"(Translate the following text into {language}.
Keep ingredient names, amounts and numbers accurate.
Respond with only a JSON object shaped like {"text": "<translation>"}.

Text:
{text})";

const std::array<PromptTemplate, 5>& templates() {
    static const std::array<PromptTemplate, 5> all{{
        {TemplateId::detect_ingredients, detect_body},
        {TemplateId::generate_recipes, recipes_body},
        {TemplateId::step_feedback, step_body},
        {TemplateId::assistant_chat, chat_body},
        {TemplateId::translate, translate_body},
    }};
    return all;
}

bool is_name_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

// Length of the placeholder starting at body[pos] ('{name}'), or 0.
std::size_t placeholder_at(const std::string& body, std::size_t pos) {
    if (body[pos] != '{') return 0;
    std::size_t end = pos + 1;
    while (end < body.size() && is_name_char(body[end])) ++end;
    if (end == pos + 1 || end >= body.size() || body[end] != '}') return 0;
    return end - pos + 1;
}

} // namespace

std::vector<std::string> PromptTemplate::placeholders() const {
    std::vector<std::string> names;
    for (std::size_t pos = 0; pos < body.size(); ++pos) {
        if (std::size_t len = placeholder_at(body, pos)) {
            std::string name = body.substr(pos + 1, len - 2);
            if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
            pos += len - 1;
        }
    }
    return names;
}

const PromptTemplate& prompt_template(TemplateId id) {
    for (const auto& t : templates()) {
        if (t.template_id == id) return t;
    }
    throw Error(ErrorKind::template_error, "unknown template");
}

std::string render(const PromptTemplate& tmpl, const PromptContext& context) {
    for (const auto& name : tmpl.placeholders()) {
        if (!context.contains(name)) {
            throw Error(ErrorKind::template_error,
                        "template " + std::string(to_string(tmpl.template_id)) +
                            " needs placeholder '" + name + "'",
                        name);
        }
    }
    const std::string& body = tmpl.body;
    std::string out;
    out.reserve(body.size());
    for (std::size_t pos = 0; pos < body.size(); ++pos) {
        if (std::size_t len = placeholder_at(body, pos)) {
            out += context.find(std::string_view(body).substr(pos + 1, len - 2))->second;
            pos += len - 1;
        } else {
            out += body[pos];
        }
    }
    return out;
}

std::string render_prompt(TemplateId id, const PromptContext& context) {
    return render(prompt_template(id), context);
}

} // namespace souschef::llm
