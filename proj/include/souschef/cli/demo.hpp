#pragma once

#include "souschef/core/model.hpp"
#include "souschef/core/serialize.hpp"
#include "souschef/perception/perception.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace souschef::cli {

// A scripted session. Each step is an object with an "op" (scan, edit,
// generate, select, rate, chat, step_check, shopping_list) plus its arguments
// and an optional "expect" block.
struct Scenario {
    std::string name;
    UserProfile profile;
    perception::Viewport viewport{800, 600};
    std::vector<std::string> staples;
    std::vector<Json> steps;
};

// Throws Error{setup_error} for unreadable files or malformed steps.
Scenario load_scenario(const std::filesystem::path& path);

// Accepts a path, or a bare name looked up as <scenarios_dir>/<name>.json.
std::filesystem::path resolve_scenario(const std::string& name_or_path,
                                       const std::filesystem::path& scenarios_dir);

// Throws Error{setup_error} naming the first fixture or snapshot the scenario
// needs but fixtures_dir lacks.
void check_fixtures(const Scenario& scenario, const std::filesystem::path& fixtures_dir);

struct DemoSummary {
    int scanned = 0;
    int manual_edits = 0;
    int valid_recipes = 0;
    int rejected_recipes = 0;
    std::string selected;
    int chats = 0;
    std::vector<std::string> verdicts;
    std::vector<std::string> shopping_list;
};

struct DemoOutcome {
    std::vector<std::string> failures;
    DemoSummary summary;
    bool ok() const { return failures.empty(); }
};

// Runs every step against an in-process service backed by the mock provider
// and a scratch journal, printing each response to `out`. Built-in invariants
// and the scenario's expectations are collected as failures; a step that
// throws unexpectedly is a failure too and stops the run.
DemoOutcome run_demo(const Scenario& scenario, const std::filesystem::path& fixtures_dir,
                     const std::filesystem::path& catalog_dir, std::ostream& out);

std::string format_summary(const DemoSummary& summary);

} // namespace souschef::cli
