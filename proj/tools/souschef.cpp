#include "CLI11.hpp"

#include "souschef/cli/demo.hpp"
#include "souschef/cli/survey.hpp"
#include "souschef/error.hpp"
#include "souschef/service/app.hpp"
#include "souschef/service/config.hpp"
#include "souschef/service/http.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace souschef;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invariant = 1;
constexpr int exit_usage = 2;

const fs::path data_dir = SOUSCHEF_DATA_DIR;

int report(const Error& e, int code) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what();
    if (!e.subject().empty()) std::cerr << " [" << e.subject() << "]";
    std::cerr << "\n";
    return code;
}

int serve(const fs::path& config_path) {
    service::ServiceConfig config;
    try {
        config = service::load_config(config_path);
    } catch (const Error& e) {
        return report(e, exit_usage);
    }
    // Block shutdown signals before any thread starts so only the waiter sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    try {
        service::App app(config, service::make_provider(config));
        for (const auto& problem : app.load_errors()) {
            std::cerr << "warning: store line " << problem.line << " (" << problem.record_id
                      << ") skipped: " << problem.message << "\n";
        }
        service::HttpServer server(app);
        int port = server.bind(config.host, config.port);
        if (port < 0) {
            std::cerr << "error: cannot bind " << config.host << ":" << config.port << "\n";
            return exit_usage;
        }
        std::thread waiter([&] {
            int sig = 0;
            sigwait(&signals, &sig);
            server.stop();
        });
        std::cout << "listening on http://" << config.host << ":" << port << " ("
                  << llm::to_string(config.provider) << " provider)" << std::endl;
        server.run();
        // run() also returns on a listen failure; wake the waiter either way.
        pthread_kill(waiter.native_handle(), SIGTERM);
        waiter.join();
    } catch (const Error& e) {
        return report(e, exit_usage);
    }
    return exit_ok;
}

int demo(const std::string& scenario_name, const fs::path& fixtures, const fs::path& catalog) {
    cli::Scenario scenario;
    try {
        scenario = cli::load_scenario(cli::resolve_scenario(scenario_name, data_dir / "scenarios"));
        cli::check_fixtures(scenario, fixtures);
    } catch (const Error& e) {
        return report(e, exit_usage);
    }
    cli::DemoOutcome outcome;
    try {
        outcome = cli::run_demo(scenario, fixtures, catalog, std::cout);
    } catch (const Error& e) {
        return report(e, e.kind() == ErrorKind::setup_error || e.kind() == ErrorKind::load_error ? exit_usage
                                                                                                 : exit_invariant);
    }
    std::cout << cli::format_summary(outcome.summary) << "\n";
    if (!outcome.ok()) {
        std::cout << "demo " << scenario.name << ": FAILED (" << outcome.failures.size() << ")\n";
        for (const auto& f : outcome.failures) std::cout << "  " << f << "\n";
        return exit_invariant;
    }
    std::cout << "demo " << scenario.name << ": ok\n";
    return exit_ok;
}

int survey(const fs::path& input, int round, const std::string& section_name) {
    std::ifstream in(input);
    if (!in) {
        std::cerr << "error: cannot read " << input << "\n";
        return exit_usage;
    }
    SurveySection section = *parse_section(section_name);
    std::vector<LikertResponse> responses;
    try {
        responses = cli::read_survey_csv(in);
    } catch (const Error& e) {
        return report(e, exit_usage);
    }
    try {
        auto report_ = cli::aggregate_survey(cli::select_responses(responses, round, section), round, section);
        std::cout << cli::format_report(report_);
    } catch (const Error& e) {
        return report(e, exit_invariant);
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sous-chef orchestration service and operator tools"};
    app.require_subcommand(1);

    fs::path config_path;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--config", config_path, "JSON config file")->required();

    std::string scenario;
    fs::path fixtures = data_dir / "fixtures";
    fs::path catalog = data_dir / "i18n";
    auto* demo_cmd = app.add_subcommand("demo", "Replay a scripted session against the mock provider");
    demo_cmd->add_option("--scenario", scenario, "Scenario file, or a bundled scenario name")->required();
    demo_cmd->add_option("--fixtures", fixtures, "Mock fixture directory");
    demo_cmd->add_option("--catalog", catalog, "i18n catalog directory");

    fs::path input;
    int round = 1;
    std::string section;
    auto* survey_cmd = app.add_subcommand("survey", "Score Likert survey responses");
    survey_cmd->add_option("--input", input, "CSV: participant_id,round,section,question_id,score")->required();
    survey_cmd->add_option("--round", round, "Survey round")->required()->check(CLI::PositiveNumber);
    survey_cmd->add_option("--section", section, "usability or background")
        ->required()
        ->check(CLI::IsMember({"usability", "background"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }
    if (*serve_cmd) return serve(config_path);
    if (*demo_cmd) return demo(scenario, fixtures, catalog);
    return survey(input, round, section);
}
