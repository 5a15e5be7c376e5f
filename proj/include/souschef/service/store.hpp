#pragma once

#include "souschef/core/model.hpp"
#include "souschef/core/serialize.hpp"
#include "souschef/service/timer.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace souschef::service {

struct StoreContents {
    std::map<std::string, UserProfile> profiles;
    std::map<std::string, PantrySession> sessions;
    std::map<std::string, Timer> timers;

    bool operator==(const StoreContents&) const = default;
};

// One journal line that could not be loaded.
struct RecordError {
    std::size_t line = 0;
    // Record id when the line was readable enough to have one.
    std::string record_id;
    std::string message;
};

struct LoadResult {
    StoreContents contents;
    std::vector<RecordError> errors;
};

// Append-only JSON-lines journal. Every write appends the full record
// (`{"kind":"session","id":...,"data":{...}}`); on load later lines win.
// Once the file holds `compact_factor` times more lines than live records it
// is rewritten with one line per record. Writes are serialized internally.
// An empty path gives an in-memory journal that never touches disk.
class Journal {
public:
    explicit Journal(std::filesystem::path path, std::size_t compact_factor = 4);

    // Reads the whole file. Bad lines are reported and skipped; everything
    // else is loaded. A missing file is an empty store.
    LoadResult load();

    void put(const UserProfile& profile);
    void put(const PantrySession& session);
    void put(const Timer& timer);

    // Rewrites the file with one line per live record.
    void compact();

    const std::filesystem::path& path() const noexcept { return path_; }
    std::size_t line_count() const;

private:
    void append(const std::string& kind, const std::string& id, Json data);

    std::filesystem::path path_;
    std::size_t compact_factor_;
    mutable std::mutex mutex_;
    // Latest encoded record per "kind/id", used for compaction.
    std::map<std::string, std::string> latest_;
    std::size_t lines_ = 0;
};

} // namespace souschef::service
