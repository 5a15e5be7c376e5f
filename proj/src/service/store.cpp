#include "souschef/service/store.hpp"

#include "souschef/error.hpp"

#include <fstream>

namespace souschef::service {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t min_lines_before_compaction = 64;

void write_all(const fs::path& path, const std::map<std::string, std::string>& records) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(ErrorKind::io_error, "cannot write " + tmp.string(), tmp.string());
        for (const auto& [key, line] : records) out << line << '\n';
        out.flush();
        if (!out) throw Error(ErrorKind::io_error, "short write to " + tmp.string(), tmp.string());
    }
    fs::rename(tmp, path);
}

} // namespace

Journal::Journal(fs::path path, std::size_t compact_factor)
    : path_(std::move(path)), compact_factor_(std::max<std::size_t>(compact_factor, 2)) {}

LoadResult Journal::load() {
    std::lock_guard lock(mutex_);
    LoadResult result;
    latest_.clear();
    lines_ = 0;
    if (path_.empty() || !fs::exists(path_)) return result;

    std::ifstream in(path_);
    if (!in) throw Error(ErrorKind::io_error, "cannot read store " + path_.string(), path_.string());

    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++lines_;
        std::string id;
        try {
            Json record = Json::parse(line);
            std::string kind = required_field<std::string>(record, "kind");
            id = required_field<std::string>(record, "id");
            const Json& data = record.at("data");
            if (kind == "profile") {
                auto value = json_detail::convert<UserProfile>(data, "data");
                if (value.id != id) throw Error(ErrorKind::schema_violation, "id mismatch", "data.id");
                result.contents.profiles[id] = std::move(value);
            } else if (kind == "session") {
                auto value = json_detail::convert<PantrySession>(data, "data");
                if (value.id != id) throw Error(ErrorKind::schema_violation, "id mismatch", "data.id");
                result.contents.sessions[id] = std::move(value);
            } else if (kind == "timer") {
                auto value = json_detail::convert<Timer>(data, "data");
                if (value.id != id) throw Error(ErrorKind::schema_violation, "id mismatch", "data.id");
                result.contents.timers[id] = std::move(value);
            } else {
                throw Error(ErrorKind::schema_violation, "unknown record kind '" + kind + "'", "kind");
            }
            latest_[kind + "/" + id] = line;
        } catch (const Error& e) {
            std::string where = e.subject().empty() ? "" : " at " + e.subject();
            result.errors.push_back({number, id, e.what() + where});
        } catch (const std::exception& e) {
            result.errors.push_back({number, id, e.what()});
        }
    }
    return result;
}

void Journal::put(const UserProfile& profile) { append("profile", profile.id, profile); }
void Journal::put(const PantrySession& session) { append("session", session.id, session); }
void Journal::put(const Timer& timer) { append("timer", timer.id, timer); }

void Journal::append(const std::string& kind, const std::string& id, Json data) {
    std::string line = Json{{"kind", kind}, {"id", id}, {"data", std::move(data)}}.dump();
    std::lock_guard lock(mutex_);
    latest_[kind + "/" + id] = line;
    if (path_.empty()) return;

    if (!path_.parent_path().empty()) fs::create_directories(path_.parent_path());
    {
        std::ofstream out(path_, std::ios::app);
        out << line << '\n';
        out.flush();
        if (!out) throw Error(ErrorKind::io_error, "cannot append to " + path_.string(), path_.string());
    }
    ++lines_;
    if (lines_ >= min_lines_before_compaction && lines_ >= compact_factor_ * latest_.size()) {
        write_all(path_, latest_);
        lines_ = latest_.size();
    }
}

void Journal::compact() {
    std::lock_guard lock(mutex_);
    if (path_.empty()) return;
    write_all(path_, latest_);
    lines_ = latest_.size();
}

std::size_t Journal::line_count() const {
    std::lock_guard lock(mutex_);
    return lines_;
}

} // namespace souschef::service
