#pragma once

#include "souschef/core/model.hpp"
#include "souschef/llm/gateway.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace souschef::perception {

// A camera frame. Only PNG and JPEG are accepted.
struct Snapshot {
    std::string bytes;
    std::string mime_type;
    int width_px = 0;
    int height_px = 0;
    Timestamp captured_at{};

    // Throws Error{invalid_input} on empty bytes, non-positive size, an
    // unsupported mime type, or bytes that don't match the mime type.
    void validate() const;
    llm::ImageData image() const;

    // Builds a snapshot from encoded bytes, sniffing the format and pixel size
    // from the PNG/JPEG header.
    static Snapshot from_bytes(std::string bytes, Timestamp captured_at = now());
    static Snapshot from_file(const std::filesystem::path& path);
};

struct Viewport {
    int width_px = 0;
    int height_px = 0;
};

struct PixelRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    bool operator==(const PixelRect&) const = default;
};

struct PixelPoint {
    int x = 0;
    int y = 0;
    bool operator==(const PixelPoint&) const = default;
};

struct LabelPlacement {
    PixelRect rect_px;
    // Top-center of the rect; the label text sits above the box.
    PixelPoint anchor_px;
    bool operator==(const LabelPlacement&) const = default;
};

// Maps a normalized box onto a viewport. Edges are rounded half-up
// independently, so the rect always stays inside the viewport.
LabelPlacement project_label(const NormBox& bbox, const Viewport& viewport);

struct DetectionResult {
    std::vector<DetectionLabel> labels;
    // Labels discarded for a blank name, malformed entry or out-of-frame box.
    int dropped_count = 0;
    // True when the model answered without any payload (nothing detected).
    bool warning = false;
};

DetectionResult detect_ingredients(const llm::Gateway& gateway, const Snapshot& snapshot,
                                   Language language, const llm::CallOptions& options = {});

// Adds every label whose canonical name isn't in the pantry yet. Existing
// entries are left untouched.
PantrySession merge_into_pantry(PantrySession session, std::span<const DetectionLabel> labels,
                                Timestamp seen_at = now());

struct PantryEdit {
    enum class Kind { add, remove };
    Kind kind = Kind::add;
    std::string value;

    static PantryEdit add(std::string name) { return {Kind::add, std::move(name)}; }
    static PantryEdit remove(std::string canonical_key) {
        return {Kind::remove, std::move(canonical_key)};
    }
};

// Manual corrections. Adding an existing key is a no-op; removing an absent
// key throws Error{not_found}.
PantrySession edit_pantry(PantrySession session, const PantryEdit& edit,
                          Timestamp at = now());

StepFeedback verify_step(const llm::Gateway& gateway, const Snapshot& snapshot,
                         const Recipe& recipe, int step_index, Language language,
                         const llm::CallOptions& options = {});

} // namespace souschef::perception
