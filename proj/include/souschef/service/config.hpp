#pragma once

#include "souschef/llm/gateway.hpp"

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace souschef::service {

struct ServiceConfig {
    llm::ProviderKind provider = llm::ProviderKind::mock;
    // generateContent URL for the live provider.
    std::string endpoint;
    // Read from SOUS_CHEF_API_KEY, never from the config file.
    std::string api_key;
    std::filesystem::path fixtures_dir;
    std::vector<std::string> staples;
    // Empty keeps everything in memory.
    std::filesystem::path store_path;
    std::filesystem::path catalog_dir;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t history_budget = 20;
    std::chrono::seconds request_timeout{60};
};

// Loads a JSON config file. Relative paths are resolved against the file's
// directory. Throws Error{setup_error} for unreadable files, unknown keys or
// bad values, and for a live provider without endpoint or API key.
ServiceConfig load_config(const std::filesystem::path& path);

// Same checks for an in-memory config (used by load_config and tests).
void check_config(const ServiceConfig& config);

std::shared_ptr<const llm::Provider> make_provider(const ServiceConfig& config);

} // namespace souschef::service
