#include "souschef/service/http.hpp"

#include "souschef/llm/base64.hpp"
#include "souschef/service/views.hpp"

#include "httplib.h"

namespace souschef::service {

namespace {

using httplib::Request;
using httplib::Response;

constexpr std::size_t max_body_bytes = 20 * 1024 * 1024;
constexpr int io_timeout_s = 60;

void send(Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
}

// Runs a handler, mapping errors onto status codes and error bodies.
template <class F>
void guarded(Response& res, F&& handler) {
    try {
        handler();
    } catch (const Error& e) {
        send(res, http_status(e.kind()), error_json(e));
    } catch (const std::exception& e) {
        send(res, 500, error_json(Error(ErrorKind::io_error, e.what())));
    }
}

[[noreturn]] void bad_request(const std::string& message, const std::string& subject = {}) {
    throw Error(ErrorKind::invalid_input, message, subject);
}

// Request decoding errors are the caller's fault, whatever the decoder says.
template <class F>
auto decode(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::schema_violation) bad_request(e.what(), e.subject());
        throw;
    }
}

Json json_body(const Request& req) {
    if (req.body.empty()) return Json::object();
    Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) bad_request("request body must be a JSON object");
    return body;
}

llm::CallOptions call_options(std::optional<std::string> fixture) {
    llm::CallOptions call;
    if (fixture && !fixture->empty()) call.fixture_tag = std::move(fixture);
    return call;
}

perception::Snapshot snapshot_from_base64(const std::string& text) {
    auto bytes = base64_decode(text);
    if (!bytes) bad_request("image_base64 is not valid base64", "image_base64");
    if (bytes->empty()) bad_request("image is empty", "image_base64");
    return perception::Snapshot::from_bytes(std::move(*bytes));
}

// Upload fields arrive either as a JSON body (image_base64 plus plain fields)
// or as multipart form data (image file part plus text parts).
class Upload {
public:
    explicit Upload(const Request& req) : req_(req) {
        if (!req.is_multipart_form_data()) body_ = json_body(req);
    }

    bool multipart() const { return req_.is_multipart_form_data(); }

    perception::Snapshot snapshot() const {
        if (multipart()) {
            if (!req_.has_file("image")) bad_request("missing image part", "image");
            std::string bytes = req_.get_file_value("image").content;
            if (bytes.empty()) bad_request("image is empty", "image");
            return perception::Snapshot::from_bytes(std::move(bytes));
        }
        return snapshot_from_base64(decode([&] { return required_field<std::string>(body_, "image_base64"); }));
    }

    std::optional<std::string> text(const char* key) const {
        if (multipart()) {
            if (!req_.has_file(key)) return std::nullopt;
            return req_.get_file_value(key).content;
        }
        return decode([&] { return optional_field<std::string>(body_, key); });
    }

    int integer(const char* key, const char* json_path_key = nullptr) const {
        if (multipart()) {
            auto value = text(key);
            if (!value) bad_request(std::string("missing field ") + key, key);
            try {
                std::size_t used = 0;
                int n = std::stoi(*value, &used);
                if (used != value->size()) throw std::invalid_argument(key);
                return n;
            } catch (const std::exception&) {
                bad_request(std::string(key) + " must be an integer", key);
            }
        }
        return decode([&] { return required_field<int>(body_, json_path_key ? json_path_key : key); });
    }

    const Json& body() const { return body_; }

private:
    const Request& req_;
    Json body_;
};

perception::Viewport viewport_of(const Upload& up) {
    if (up.multipart()) {
        return {up.integer("viewport_width_px"), up.integer("viewport_height_px")};
    }
    return decode([&] {
        auto vp = required_field<Json>(up.body(), "viewport");
        return perception::Viewport{required_field<int>(vp, "width_px"), required_field<int>(vp, "height_px")};
    });
}

} // namespace

HttpServer::HttpServer(App& app, std::chrono::milliseconds tick_interval)
    : app_(app), server_(std::make_unique<httplib::Server>()), tick_interval_(tick_interval) {
    server_->set_read_timeout(io_timeout_s, 0);
    server_->set_write_timeout(io_timeout_s, 0);
    server_->set_payload_max_length(max_body_bytes);
    install_routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() {
    {
        std::lock_guard lock(tick_mutex_);
        stopping_ = false;
    }
    ticker_ = std::thread([this] { tick_loop(); });
    return server_->listen_after_bind();
}

void HttpServer::stop() {
    server_->stop();
    {
        std::lock_guard lock(tick_mutex_);
        stopping_ = true;
    }
    tick_cv_.notify_all();
    if (ticker_.joinable()) ticker_.join();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

void HttpServer::tick_loop() {
    std::unique_lock lock(tick_mutex_);
    while (!tick_cv_.wait_for(lock, tick_interval_, [this] { return stopping_; })) {
        lock.unlock();
        try {
            app_.tick();
        } catch (const std::exception&) {
            // A failed journal write must not kill the scheduler; the next
            // poll retries it.
        }
        lock.lock();
    }
}

void HttpServer::install_routes() {
    auto& s = *server_;
    App& app = app_;

    // ---- profiles
    s.Post("/profiles", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            auto profile = decode([&] { return json_body(req).get<UserProfile>(); });
            send(res, 201, app.create_profile(std::move(profile)));
        });
    });
    s.Get(R"(/profiles/([^/]+))", [&app](const Request& req, Response& res) {
        guarded(res, [&] { send(res, 200, app.get_profile(req.matches[1])); });
    });
    s.Put(R"(/profiles/([^/]+))", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            auto profile = decode([&] { return json_body(req).get<UserProfile>(); });
            send(res, 200, app.update_profile(req.matches[1], std::move(profile)));
        });
    });

    // ---- sessions
    s.Post("/sessions", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            auto profile_id = decode([&] { return required_field<std::string>(json_body(req), "profile_id"); });
            send(res, 201, app.create_session(profile_id));
        });
    });
    s.Get(R"(/sessions/([^/]+))", [&app](const Request& req, Response& res) {
        guarded(res, [&] { send(res, 200, app.get_session(req.matches[1])); });
    });

    s.Post(R"(/sessions/([^/]+)/scan)", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            Upload up(req);
            auto snapshot = up.snapshot();
            auto viewport = viewport_of(up);
            auto outcome = app.scan(req.matches[1], snapshot, viewport, call_options(up.text("fixture")));
            send(res, 200, scan_json(outcome));
        });
    });

    s.Post(R"(/sessions/([^/]+)/pantry)", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            Json body = json_body(req);
            auto edit = decode([&] {
                auto action = required_field<std::string>(body, "action");
                if (action == "add") return perception::PantryEdit::add(required_field<std::string>(body, "name"));
                if (action == "remove") {
                    auto key = optional_field<std::string>(body, "canonical_key");
                    return perception::PantryEdit::remove(key ? *key : required_field<std::string>(body, "name"));
                }
                bad_request("action must be 'add' or 'remove'", "action");
            });
            send(res, 200, Json{{"pantry", pantry_json(app.edit_pantry(req.matches[1], edit))}});
        });
    });

    s.Post(R"(/sessions/([^/]+)/recipes)", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            Json body = json_body(req);
            int count = decode([&] { return field_or<int>(body, "count", 3); });
            auto fixture = decode([&] { return optional_field<std::string>(body, "fixture"); });
            send(res, 200, recipe_batch_json(app.generate_recipes(req.matches[1], count, call_options(fixture))));
        });
    });
    s.Post(R"(/sessions/([^/]+)/recipes/([^/]+)/select)", [&app](const Request& req, Response& res) {
        guarded(res, [&] { send(res, 200, app.select_recipe(req.matches[1], req.matches[2])); });
    });
    s.Post(R"(/sessions/([^/]+)/recipes/([^/]+)/rate)", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            int stars = decode([&] { return required_field<int>(json_body(req), "stars"); });
            send(res, 200, app.rate_recipe(req.matches[1], req.matches[2], stars));
        });
    });
    s.Post(R"(/sessions/([^/]+)/recipes/([^/]+)/shopping-list)", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            std::string rid = req.matches[2];
            send(res, 200, shopping_list_json(rid, app.shopping_list(req.matches[1], rid)));
        });
    });

    s.Post(R"(/sessions/([^/]+)/chat)", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            Json body = json_body(req);
            auto [text, modality, fixture] = decode([&] {
                auto text = required_field<std::string>(body, "text");
                auto name = field_or<std::string>(body, "modality", "text");
                auto modality = parse_modality(name);
                if (!modality) bad_request("modality must be 'text' or 'voice_transcript'", "modality");
                return std::tuple{text, *modality, optional_field<std::string>(body, "fixture")};
            });
            send(res, 200, app.chat(req.matches[1], text, modality, call_options(fixture)));
        });
    });

    s.Post(R"(/sessions/([^/]+)/step-check)", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            Upload up(req);
            auto recipe_id = up.text("recipe_id");
            if (!recipe_id) bad_request("missing field recipe_id", "recipe_id");
            int step_index = up.integer("step_index");
            auto snapshot = up.snapshot();
            send(res, 200, app.step_check(req.matches[1], *recipe_id, step_index, snapshot,
                                          call_options(up.text("fixture"))));
        });
    });

    // ---- timers
    s.Post(R"(/sessions/([^/]+)/timers)", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            Json body = json_body(req);
            auto [label, duration] = decode([&] {
                return std::pair{required_field<std::string>(body, "label"),
                                 required_field<int>(body, "duration_s")};
            });
            send(res, 201, app.create_timer(req.matches[1], label, duration));
        });
    });
    s.Get(R"(/sessions/([^/]+)/timers)", [&app](const Request& req, Response& res) {
        guarded(res, [&] { send(res, 200, Json{{"timers", app.session_timers(req.matches[1])}}); });
    });
    s.Get(R"(/timers/([^/]+))", [&app](const Request& req, Response& res) {
        guarded(res, [&] { send(res, 200, app.get_timer(req.matches[1])); });
    });
    s.Post(R"(/timers/([^/]+)/pause)", [&app](const Request& req, Response& res) {
        guarded(res, [&] { send(res, 200, app.pause_timer(req.matches[1])); });
    });
    s.Post(R"(/timers/([^/]+)/resume)", [&app](const Request& req, Response& res) {
        guarded(res, [&] { send(res, 200, app.resume_timer(req.matches[1])); });
    });

    // ---- static strings
    s.Get(R"(/i18n/([^/]+))", [&app](const Request& req, Response& res) {
        guarded(res, [&] {
            std::string tag = req.matches[1];
            auto language = parse_language(tag);
            if (!language) throw Error(ErrorKind::not_found, "unsupported language '" + tag + "'", tag);
            send(res, 200, app.catalog().table(*language));
        });
    });

    s.set_error_handler([](const Request&, Response& res) {
        if (!res.body.empty()) return;
        Error e(res.status == 404 ? ErrorKind::not_found : ErrorKind::invalid_input,
                res.status == 404 ? "no such route" : "request rejected");
        res.set_content(error_json(e).dump(), "application/json; charset=utf-8");
    });
}

} // namespace souschef::service
