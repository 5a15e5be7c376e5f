#pragma once

#include "souschef/service/app.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace souschef::service {

// HTTP/JSON front end for an App, plus the scheduler thread that ticks its
// timers. Routes are listed in docs/api.md.
class HttpServer {
public:
    explicit HttpServer(App& app,
                        std::chrono::milliseconds tick_interval = std::chrono::milliseconds(250));
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds without serving yet; port 0 picks a free port. Returns the port,
    // or -1 when binding failed.
    int bind(const std::string& host, int port);
    // Serves until stop(). Blocks.
    bool run();
    void stop();
    void wait_until_ready() const;

private:
    void install_routes();
    void tick_loop();

    App& app_;
    std::unique_ptr<httplib::Server> server_;
    std::chrono::milliseconds tick_interval_;
    std::thread ticker_;
    std::mutex tick_mutex_;
    std::condition_variable tick_cv_;
    bool stopping_ = false;
};

} // namespace souschef::service
