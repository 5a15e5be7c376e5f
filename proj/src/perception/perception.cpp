#include "souschef/perception/perception.hpp"

#include "souschef/core/format.hpp"
#include "souschef/error.hpp"
#include "souschef/llm/extract.hpp"
#include "souschef/llm/prompt.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace souschef::perception {

namespace {

constexpr std::string_view png_signature{"\x89PNG\r\n\x1a\n", 8};

bool looks_like_png(std::string_view b) { return b.substr(0, 8) == png_signature; }
bool looks_like_jpeg(std::string_view b) {
    return b.size() >= 3 && static_cast<unsigned char>(b[0]) == 0xFF &&
           static_cast<unsigned char>(b[1]) == 0xD8 && static_cast<unsigned char>(b[2]) == 0xFF;
}

unsigned be16(std::string_view b, std::size_t at) {
    return (static_cast<unsigned char>(b[at]) << 8) | static_cast<unsigned char>(b[at + 1]);
}

unsigned long be32(std::string_view b, std::size_t at) {
    return (static_cast<unsigned long>(be16(b, at)) << 16) | be16(b, at + 2);
}

struct Dimensions {
    int width = 0;
    int height = 0;
};

std::optional<Dimensions> png_size(std::string_view b) {
    if (b.size() < 24 || b.substr(12, 4) != "IHDR") return std::nullopt;
    return Dimensions{static_cast<int>(be32(b, 16)), static_cast<int>(be32(b, 20))};
}

std::optional<Dimensions> jpeg_size(std::string_view b) {
    std::size_t pos = 2;
    while (pos + 4 <= b.size()) {
        if (static_cast<unsigned char>(b[pos]) != 0xFF) return std::nullopt;
        unsigned char marker = static_cast<unsigned char>(b[pos + 1]);
        if (marker == 0xFF) {
            ++pos;
            continue;
        }
        if (marker == 0xD8 || marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
            pos += 2;
            continue;
        }
        unsigned length = be16(b, pos + 2);
        bool start_of_frame = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 &&
                              marker != 0xC8 && marker != 0xCC;
        if (start_of_frame) {
            if (pos + 9 > b.size()) return std::nullopt;
            return Dimensions{static_cast<int>(be16(b, pos + 7)), static_cast<int>(be16(b, pos + 5))};
        }
        pos += 2 + length;
    }
    return std::nullopt;
}

// round(value * extent / 1000), half-up, exact for non-negative integers.
int scale_edge(int value, int extent) {
    long long num = 2LL * value * extent + NormBox::scale;
    return static_cast<int>(num / (2LL * NormBox::scale));
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos; }

std::string trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r\n\f\v");
    return std::string(s.substr(first, last - first + 1));
}

} // namespace

void Snapshot::validate() const {
    if (bytes.empty()) throw Error(ErrorKind::invalid_input, "snapshot is empty", "bytes");
    if (width_px <= 0 || height_px <= 0) {
        throw Error(ErrorKind::invalid_input, "snapshot size must be positive", "width_px");
    }
    if (mime_type == "image/png") {
        if (!looks_like_png(bytes)) {
            throw Error(ErrorKind::invalid_input, "snapshot bytes are not PNG", "mime_type");
        }
    } else if (mime_type == "image/jpeg") {
        if (!looks_like_jpeg(bytes)) {
            throw Error(ErrorKind::invalid_input, "snapshot bytes are not JPEG", "mime_type");
        }
    } else {
        throw Error(ErrorKind::invalid_input, "snapshot must be image/png or image/jpeg",
                    "mime_type");
    }
}

llm::ImageData Snapshot::image() const {
    return llm::ImageData{bytes, mime_type, width_px, height_px};
}

Snapshot Snapshot::from_bytes(std::string bytes, Timestamp captured_at) {
    Snapshot snap;
    std::optional<Dimensions> dims;
    if (looks_like_png(bytes)) {
        snap.mime_type = "image/png";
        dims = png_size(bytes);
    } else if (looks_like_jpeg(bytes)) {
        snap.mime_type = "image/jpeg";
        dims = jpeg_size(bytes);
    } else {
        throw Error(ErrorKind::invalid_input, "snapshot must be a PNG or JPEG image", "bytes");
    }
    if (!dims) throw Error(ErrorKind::invalid_input, "cannot read image dimensions", "bytes");
    snap.bytes = std::move(bytes);
    snap.width_px = dims->width;
    snap.height_px = dims->height;
    snap.captured_at = captured_at;
    snap.validate();
    return snap;
}

Snapshot Snapshot::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io_error, "cannot read snapshot " + path.string(), path.string());
    return from_bytes(
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
}

LabelPlacement project_label(const NormBox& bbox, const Viewport& viewport) {
    int left = scale_edge(bbox.x_min, viewport.width_px);
    int right = scale_edge(bbox.x_max, viewport.width_px);
    int top = scale_edge(bbox.y_min, viewport.height_px);
    int bottom = scale_edge(bbox.y_max, viewport.height_px);
    PixelRect rect{left, top, right - left, bottom - top};
    return LabelPlacement{rect, PixelPoint{rect.x + rect.w / 2, rect.y}};
}

DetectionResult detect_ingredients(const llm::Gateway& gateway, const Snapshot& snapshot,
                                   Language language, const llm::CallOptions& options) {
    snapshot.validate();
    llm::LlmRequest request;
    request.template_id = llm::TemplateId::detect_ingredients;
    request.user_text = llm::render_prompt(request.template_id,
                                           {{"language", std::string(english_name(language))}});
    request.image = snapshot.image();
    request.language = language;
    request.max_output_tokens = options.max_output_tokens;
    request.fixture_tag = options.fixture_tag;

    auto response = gateway.complete(request);

    DetectionResult result;
    Json payload;
    try {
        payload = llm::locate_json(response.raw_text);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::no_payload) throw;
        result.warning = true;
        return result;
    }
    auto batch = llm::decode_labels_lenient(payload);
    result.dropped_count = batch.malformed;
    for (const auto& raw : batch.labels) {
        NormBox box{raw.box[0], raw.box[1], raw.box[2], raw.box[3]};
        bool confidence_ok = !raw.confidence || (*raw.confidence >= 0.0 && *raw.confidence <= 1.0);
        if (blank(raw.name) || !box.valid() || !confidence_ok) {
            ++result.dropped_count;
            continue;
        }
        result.labels.push_back(DetectionLabel{trim(raw.name), box, raw.confidence});
    }
    return result;
}

PantrySession merge_into_pantry(PantrySession session, std::span<const DetectionLabel> labels,
                                Timestamp seen_at) {
    for (const auto& label : labels) {
        if (blank(label.name)) continue;
        Ingredient candidate(label.name, IngredientSource::scanned, seen_at);
        if (!session.has_ingredient(candidate.canonical_key())) {
            session.ingredients.push_back(std::move(candidate));
        }
    }
    return session;
}

PantrySession edit_pantry(PantrySession session, const PantryEdit& edit, Timestamp at) {
    std::string key = canonicalize(edit.value);
    if (edit.kind == PantryEdit::Kind::add) {
        if (!session.has_ingredient(key)) {
            session.ingredients.emplace_back(trim(edit.value), IngredientSource::manual, at);
        }
        return session;
    }
    auto it = std::find_if(session.ingredients.begin(), session.ingredients.end(),
                           [&](const Ingredient& i) { return i.canonical_key() == key; });
    if (it == session.ingredients.end()) {
        throw Error(ErrorKind::not_found, "ingredient '" + key + "' is not in the pantry", key);
    }
    session.ingredients.erase(it);
    return session;
}

StepFeedback verify_step(const llm::Gateway& gateway, const Snapshot& snapshot,
                         const Recipe& recipe, int step_index, Language language,
                         const llm::CallOptions& options) {
    if (step_index < 0 || static_cast<std::size_t>(step_index) >= recipe.steps.size()) {
        throw Error(ErrorKind::invalid_step,
                    "step " + std::to_string(step_index) + " is outside the recipe's " +
                        std::to_string(recipe.steps.size()) + " steps",
                    std::to_string(step_index));
    }
    snapshot.validate();
    llm::LlmRequest request;
    request.template_id = llm::TemplateId::step_feedback;
    request.user_text = llm::render_prompt(
        request.template_id,
        {{"recipe", describe_recipe(recipe)},
         {"step", std::to_string(step_index + 1) + ". " + recipe.steps[step_index]},
         {"language", std::string(english_name(language))}});
    request.image = snapshot.image();
    request.language = language;
    request.max_output_tokens = options.max_output_tokens;
    request.fixture_tag = options.fixture_tag;

    auto response = gateway.complete(request);
    auto payload = std::get<llm::FeedbackPayload>(
        llm::extract_structured(response.raw_text, llm::SchemaId::feedback));
    return StepFeedback{step_index, payload.verdict, payload.explanation};
}

} // namespace souschef::perception
