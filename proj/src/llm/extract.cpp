#include "souschef/llm/extract.hpp"

#include "souschef/error.hpp"

#include <cctype>
#include <cmath>

namespace souschef::llm {

namespace {

bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::optional<Json> try_parse(std::string_view text) {
    if (is_blank(text)) return std::nullopt;
    Json value = Json::parse(strip_trailing_commas(text), nullptr, false);
    if (value.is_discarded() || !(value.is_object() || value.is_array())) return std::nullopt;
    return value;
}

std::optional<Json> from_fences(std::string_view raw) {
    constexpr std::string_view fence = "```";
    std::size_t open = raw.find(fence);
    while (open != std::string_view::npos) {
        std::size_t pos = open + fence.size();
        // Info string such as "json" on the opening line.
        while (pos < raw.size() && (std::isalnum(static_cast<unsigned char>(raw[pos])) ||
                                    raw[pos] == '_' || raw[pos] == '+' || raw[pos] == '-')) {
            ++pos;
        }
        std::size_t close = raw.find(fence, pos);
        std::string_view body =
            raw.substr(pos, close == std::string_view::npos ? std::string_view::npos : close - pos);
        if (auto value = try_parse(body)) return value;
        if (close == std::string_view::npos) break;
        open = raw.find(fence, close + fence.size());
    }
    return std::nullopt;
}

// End index (exclusive) of the balanced span opening at raw[start], if any.
std::optional<std::size_t> balanced_end(std::string_view raw, std::size_t start) {
    std::string stack;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < raw.size(); ++i) {
        char c = raw[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        switch (c) {
        case '"': in_string = true; break;
        case '{': stack += '}'; break;
        case '[': stack += ']'; break;
        case '}':
        case ']':
            if (stack.empty() || stack.back() != c) return std::nullopt;
            stack.pop_back();
            if (stack.empty()) return i + 1;
            break;
        default: break;
        }
    }
    return std::nullopt;
}

std::optional<Json> from_balanced_span(std::string_view raw) {
    for (std::size_t start = raw.find_first_of("{["); start != std::string_view::npos;
         start = raw.find_first_of("{[", start + 1)) {
        if (auto end = balanced_end(raw, start)) {
            if (auto value = try_parse(raw.substr(start, *end - start))) return value;
        }
    }
    return std::nullopt;
}

[[noreturn]] void violation(std::string message, std::string path) {
    throw Error(ErrorKind::schema_violation, std::move(message), std::move(path));
}

const Json& unwrap_list(const Json& value, const char* key) {
    if (value.is_object() && value.contains(key) && value[key].is_array()) return value[key];
    if (!value.is_array()) violation(std::string("expected an array of ") + key, "");
    return value;
}

int coordinate(const Json& v, const std::string& path) {
    if (!v.is_number()) violation("box coordinate must be a number", path);
    double d = v.get<double>();
    if (!std::isfinite(d) || std::abs(d) > 1e9) violation("box coordinate out of range", path);
    return static_cast<int>(std::lround(d));
}

RawLabel decode_label(const Json& item, const std::string& path) {
    if (!item.is_object()) violation("expected an object", path);
    RawLabel label;
    auto name = item.find("name");
    if (name == item.end() || !name->is_string()) violation("name must be a string", path + ".name");
    label.name = name->get<std::string>();

    const char* box_key = item.contains("box") ? "box" : "box_2d";
    auto box = item.find(box_key);
    std::string box_path = path + "." + box_key;
    if (box == item.end() || !box->is_array() || box->size() != 4) {
        violation("box must be an array of 4 numbers", box_path);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        label.box[i] = coordinate((*box)[i], box_path + "[" + std::to_string(i) + "]");
    }
    if (auto conf = item.find("confidence"); conf != item.end() && !conf->is_null()) {
        if (!conf->is_number()) violation("confidence must be a number", path + ".confidence");
        label.confidence = conf->get<double>();
    }
    return label;
}

std::vector<RawLabel> decode_labels(const Json& value) {
    const Json& list = unwrap_list(value, "labels");
    std::vector<RawLabel> labels;
    for (std::size_t i = 0; i < list.size(); ++i) {
        labels.push_back(decode_label(list[i], "[" + std::to_string(i) + "]"));
    }
    return labels;
}

std::vector<Recipe> decode_recipes(const Json& value) {
    return json_detail::convert<std::vector<Recipe>>(unwrap_list(value, "recipes"), "");
}

FeedbackPayload decode_feedback(const Json& value) {
    if (!value.is_object()) violation("expected an object", "");
    FeedbackPayload payload;
    auto verdict_text = required_field<std::string>(value, "verdict");
    auto verdict = parse_verdict(verdict_text);
    if (!verdict) violation("unknown verdict '" + verdict_text + "'", "verdict");
    payload.verdict = *verdict;
    payload.explanation = field_or<std::string>(value, "explanation", "");
    if (payload.verdict == Verdict::needs_adjustment && is_blank(payload.explanation)) {
        violation("explanation required when verdict is needs_adjustment", "explanation");
    }
    return payload;
}

TranslationPayload decode_translation(const Json& value) {
    if (!value.is_object()) violation("expected an object", "");
    TranslationPayload payload{required_field<std::string>(value, "text")};
    if (is_blank(payload.text)) violation("translation is blank", "text");
    return payload;
}

} // namespace

std::string_view to_string(SchemaId id) {
    switch (id) {
    case SchemaId::labels: return "labels";
    case SchemaId::recipes: return "recipes";
    case SchemaId::feedback: return "feedback";
    case SchemaId::translation: return "translation";
    }
    return "unknown";
}

std::string strip_trailing_commas(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == ',') {
            std::size_t next = text.find_first_not_of(" \t\r\n", i + 1);
            if (next != std::string_view::npos && (text[next] == '}' || text[next] == ']')) {
                continue;
            }
        }
        out += c;
    }
    return out;
}

Json locate_json(std::string_view raw_text) {
    if (auto value = from_fences(raw_text)) return *value;
    if (auto value = from_balanced_span(raw_text)) return *value;
    throw Error(ErrorKind::no_payload, "no structured payload found in model output");
}

StructuredPayload decode_payload(const Json& value, SchemaId schema) {
    switch (schema) {
    case SchemaId::labels: return decode_labels(value);
    case SchemaId::recipes: return decode_recipes(value);
    case SchemaId::feedback: return decode_feedback(value);
    case SchemaId::translation: return decode_translation(value);
    }
    throw Error(ErrorKind::schema_violation, "unknown schema");
}

StructuredPayload extract_structured(std::string_view raw_text, SchemaId schema) {
    return decode_payload(locate_json(raw_text), schema);
}

LabelBatch decode_labels_lenient(const Json& value) {
    const Json& list = unwrap_list(value, "labels");
    LabelBatch batch;
    for (std::size_t i = 0; i < list.size(); ++i) {
        try {
            batch.labels.push_back(decode_label(list[i], "[" + std::to_string(i) + "]"));
        } catch (const Error&) {
            ++batch.malformed;
        }
    }
    return batch;
}

Json encode_payload(const StructuredPayload& payload) {
    struct Encoder {
        Json operator()(const std::vector<RawLabel>& labels) const {
            Json out = Json::array();
            for (const auto& l : labels) {
                Json item{{"name", l.name}, {"box", l.box}};
                if (l.confidence) item["confidence"] = *l.confidence;
                out.push_back(std::move(item));
            }
            return out;
        }
        Json operator()(const std::vector<Recipe>& recipes) const { return Json(recipes); }
        Json operator()(const FeedbackPayload& f) const {
            return Json{{"verdict", to_string(f.verdict)}, {"explanation", f.explanation}};
        }
        Json operator()(const TranslationPayload& t) const { return Json{{"text", t.text}}; }
    };
    return std::visit(Encoder{}, payload);
}

} // namespace souschef::llm
