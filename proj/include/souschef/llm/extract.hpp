#pragma once

#include "souschef/core/serialize.hpp"
#include "souschef/core/model.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace souschef::llm {

enum class SchemaId { labels, recipes, feedback, translation };

std::string_view to_string(SchemaId id);

// A label exactly as the model wrote it. Box order is [y_min, x_min, y_max,
// x_max]; range checks happen downstream so one bad box doesn't sink a scan.
struct RawLabel {
    std::string name;
    std::array<int, 4> box{};
    std::optional<double> confidence;

    bool operator==(const RawLabel&) const = default;
};

struct FeedbackPayload {
    Verdict verdict = Verdict::correct;
    std::string explanation;

    bool operator==(const FeedbackPayload&) const = default;
};

struct TranslationPayload {
    std::string text;

    bool operator==(const TranslationPayload&) const = default;
};

using StructuredPayload =
    std::variant<std::vector<RawLabel>, std::vector<Recipe>, FeedbackPayload, TranslationPayload>;

// Returns the JSON text of the first payload: the first fenced block that
// parses, otherwise the first balanced {...} or [...] span that parses.
// Trailing commas are stripped before parsing. Throws Error{no_payload}.
Json locate_json(std::string_view raw_text);

// Removes commas that directly precede a closing bracket, outside strings.
std::string strip_trailing_commas(std::string_view text);

// Decodes an already-located JSON value against a schema. Throws
// Error{schema_violation} with the offending field path as subject.
StructuredPayload decode_payload(const Json& value, SchemaId schema);

StructuredPayload extract_structured(std::string_view raw_text, SchemaId schema);

// Label lists decoded element by element: malformed entries are counted and
// skipped instead of failing the whole list.
struct LabelBatch {
    std::vector<RawLabel> labels;
    int malformed = 0;
};
LabelBatch decode_labels_lenient(const Json& value);

// Canonical JSON rendering of a payload (inverse of decode_payload).
Json encode_payload(const StructuredPayload& payload);

} // namespace souschef::llm
