#include "souschef/service/config.hpp"

#include "souschef/core/serialize.hpp"
#include "souschef/error.hpp"
#include "souschef/llm/providers.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace souschef::service {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void setup_error(const std::string& message, const std::string& subject = {}) {
    throw Error(ErrorKind::setup_error, message, subject);
}

fs::path resolve(const fs::path& base, const std::string& value) {
    fs::path p(value);
    return p.is_absolute() || value.empty() ? p : base / p;
}

} // namespace

ServiceConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) setup_error("cannot read config " + path.string(), path.string());
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) setup_error("config is not a JSON object", path.string());

    static const std::set<std::string> known{"provider", "endpoint", "fixtures_dir", "staples",
                                             "store_path", "catalog_dir", "host", "port",
                                             "history_budget", "request_timeout_s"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) setup_error("unknown config key '" + key + "'", key);
    }

    fs::path base = path.parent_path();
    ServiceConfig cfg;
    try {
        auto provider = field_or<std::string>(doc, "provider", "mock");
        if (provider == "live") {
            cfg.provider = llm::ProviderKind::live;
        } else if (provider != "mock") {
            setup_error("provider must be 'mock' or 'live'", "provider");
        }
        cfg.endpoint = field_or<std::string>(doc, "endpoint", "");
        cfg.fixtures_dir = resolve(base, field_or<std::string>(doc, "fixtures_dir", ""));
        cfg.staples = field_or<std::vector<std::string>>(doc, "staples", {});
        cfg.store_path = resolve(base, field_or<std::string>(doc, "store_path", ""));
        cfg.catalog_dir = resolve(base, field_or<std::string>(doc, "catalog_dir", ""));
        cfg.host = field_or<std::string>(doc, "host", cfg.host);
        cfg.port = field_or<int>(doc, "port", cfg.port);
        cfg.history_budget = field_or<std::size_t>(doc, "history_budget", cfg.history_budget);
        cfg.request_timeout = std::chrono::seconds(field_or<int>(doc, "request_timeout_s", 60));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::setup_error) throw;
        setup_error(std::string("bad config value: ") + e.what(), e.subject());
    }
    if (const char* key = std::getenv("SOUS_CHEF_API_KEY")) cfg.api_key = key;
    check_config(cfg);
    return cfg;
}

void check_config(const ServiceConfig& cfg) {
    if (cfg.provider == llm::ProviderKind::live) {
        if (cfg.endpoint.empty()) setup_error("live provider needs an endpoint", "endpoint");
        if (cfg.api_key.empty()) setup_error("live provider needs SOUS_CHEF_API_KEY", "api_key");
    } else if (cfg.fixtures_dir.empty() || !fs::is_directory(cfg.fixtures_dir)) {
        setup_error("mock provider needs an existing fixtures_dir", "fixtures_dir");
    }
    if (cfg.catalog_dir.empty() || !fs::is_directory(cfg.catalog_dir)) {
        setup_error("catalog_dir must be an existing directory", "catalog_dir");
    }
    if (cfg.port < 0 || cfg.port > 65535) setup_error("port out of range", "port");
    if (cfg.history_budget < 2) setup_error("history_budget must be at least 2", "history_budget");
    if (cfg.request_timeout.count() <= 0) setup_error("request_timeout_s must be positive", "request_timeout_s");
}

std::shared_ptr<const llm::Provider> make_provider(const ServiceConfig& cfg) {
    if (cfg.provider == llm::ProviderKind::mock) {
        return std::make_shared<llm::MockProvider>(cfg.fixtures_dir);
    }
    llm::LiveConfig live;
    live.endpoint = cfg.endpoint;
    live.api_key = cfg.api_key;
    live.request_timeout = cfg.request_timeout;
    return std::make_shared<llm::LiveProvider>(live);
}

} // namespace souschef::service
