#include "souschef/cli/demo.hpp"

#include "souschef/core/format.hpp"
#include "souschef/error.hpp"
#include "souschef/llm/providers.hpp"
#include "souschef/service/app.hpp"
#include "souschef/service/views.hpp"

#include <fstream>
#include <map>
#include <set>

namespace souschef::cli {

namespace fs = std::filesystem;

namespace {

// Model template used by each op that calls the provider.
const std::map<std::string, std::string, std::less<>> model_ops{
    {"scan", "detect_ingredients"},
    {"generate", "generate_recipes"},
    {"chat", "assistant_chat"},
    {"step_check", "step_feedback"},
};

const std::set<std::string, std::less<>> plain_ops{"edit", "select", "rate", "shopping_list"};

Error setup(const std::string& message, const std::string& subject = {}) {
    return Error(ErrorKind::setup_error, message, subject);
}

bool uses_snapshot(const std::string& op) { return op == "scan" || op == "step_check"; }

bool overlaps(const std::string& a, const std::string& b) {
    return a.find(b) != std::string::npos || b.find(a) != std::string::npos;
}

// Everything the demo needs while stepping through a scenario.
class Runner {
public:
    Runner(const Scenario& scenario, service::App& app, const fs::path& fixtures_dir, std::ostream& out)
        : scenario_(scenario), app_(app), snapshots_(fixtures_dir / "snapshots"), out_(out) {
        for (const auto& name : scenario.staples) staples_.insert(canonicalize(name));
    }

    DemoOutcome run() {
        profile_ = app_.create_profile(scenario_.profile);
        session_id_ = app_.create_session(profile_.id).id;
        out_ << "demo " << scenario_.name << ": profile " << profile_.id << ", session " << session_id_
             << "\n";
        for (std::size_t i = 0; i < scenario_.steps.size(); ++i) {
            const Json& step = scenario_.steps[i];
            std::string op = step["op"];
            out_ << "[" << i + 1 << "] " << op << "\n";
            step_ = "step " + std::to_string(i + 1) + " (" + op + ")";
            try {
                dispatch(op, step, step.value("expect", Json::object()));
            } catch (const Error& e) {
                std::string expected = step.value("expect", Json::object()).value("error", "");
                out_ << "    " << service::error_json(e).dump() << "\n";
                if (expected != to_string(e.kind())) {
                    fail(std::string("unexpected ") + std::string(to_string(e.kind())) + ": " + e.what());
                    break;
                }
                continue;
            }
            if (step.value("expect", Json::object()).contains("error")) fail("expected an error");
        }
        return {failures_, summary_};
    }

    const std::string& session_id() const { return session_id_; }

private:
    void fail(const std::string& what) {
        failures_.push_back(step_ + ": " + what);
        out_ << "    FAIL " << what << "\n";
    }

    void expect_eq(const Json& expect, const std::string& key, const Json& actual) {
        if (!expect.contains(key)) return;
        if (expect[key] != actual) {
            fail(key + " expected " + expect[key].dump() + ", got " + actual.dump());
        } else {
            out_ << "    ok " << key << " = " << actual.dump() << "\n";
        }
    }

    void show(const Json& body) { out_ << "    " << body.dump() << "\n"; }

    llm::CallOptions call(const Json& step) const {
        llm::CallOptions c;
        c.fixture_tag = step["fixture"].get<std::string>();
        return c;
    }

    perception::Snapshot snapshot(const Json& step) const {
        return perception::Snapshot::from_file(snapshots_ / step["snapshot"].get<std::string>());
    }

    std::string recipe_ref(const Json& step) const {
        if (!step.contains("recipe")) {
            auto session = app_.get_session(session_id_);
            if (!session.selected_recipe) throw Error(ErrorKind::precondition, "no recipe selected");
            return *session.selected_recipe;
        }
        const auto& offered = app_.get_session(session_id_).offered_recipes;
        if (step["recipe"].is_number_integer()) {
            auto index = step["recipe"].get<std::size_t>();
            if (index >= last_batch_.size()) {
                throw Error(ErrorKind::out_of_range, "recipe index " + std::to_string(index) + " not in the last batch");
            }
            return last_batch_[index];
        }
        std::string title = step["recipe"];
        for (const auto& r : offered) {
            if (r.title == title) return r.id;
        }
        throw Error(ErrorKind::not_found, "no offered recipe titled " + title, title);
    }

    void dispatch(const std::string& op, const Json& step, const Json& expect) {
        if (op == "scan") return scan(step, expect);
        if (op == "edit") return edit(step, expect);
        if (op == "generate") return generate(step, expect);
        if (op == "select") return select(step);
        if (op == "rate") return rate(step);
        if (op == "chat") return chat(step, expect);
        if (op == "step_check") return step_check(step, expect);
        shopping(step, expect);
    }

    void scan(const Json& step, const Json& expect) {
        auto result = app_.scan(session_id_, snapshot(step), scenario_.viewport, call(step));
        show(service::scan_json(result));
        summary_.scanned += static_cast<int>(result.labels.size());
        for (const auto& placed : result.labels) {
            const auto& r = placed.placement.rect_px;
            if (r.x < 0 || r.y < 0 || r.w < 0 || r.h < 0 || r.x + r.w > scenario_.viewport.width_px ||
                r.y + r.h > scenario_.viewport.height_px) {
                fail("label " + placed.label.name + " lies outside the viewport");
            }
        }
        std::set<std::string> keys;
        for (const auto& ing : result.session.ingredients) {
            if (!keys.insert(ing.canonical_key()).second) fail("duplicate pantry key " + ing.canonical_key());
        }
        for (const auto& placed : result.labels) {
            if (!keys.count(canonicalize(placed.label.name))) fail("label " + placed.label.name + " missing from pantry");
        }
        expect_eq(expect, "labels", result.labels.size());
        expect_eq(expect, "dropped", result.dropped_count);
        expect_eq(expect, "warning", result.warning);
        expect_eq(expect, "pantry", result.session.ingredients.size());
    }

    void edit(const Json& step, const Json& expect) {
        std::string action = step["action"];
        std::string name = step["name"];
        auto before = app_.get_session(session_id_).ingredients.size();
        auto edit = action == "add" ? perception::PantryEdit::add(name)
                                    : perception::PantryEdit::remove(canonicalize(name));
        auto session = app_.edit_pantry(session_id_, edit);
        show(service::pantry_json(session));
        ++summary_.manual_edits;
        bool present = false;
        for (const auto& ing : session.ingredients) present = present || ing.canonical_key() == canonicalize(name);
        if (present != (action == "add")) fail(name + " has the wrong presence after " + action);
        if (action == "remove" && session.ingredients.size() + 1 != before) fail("remove changed more than one entry");
        expect_eq(expect, "pantry", session.ingredients.size());
    }

    void generate(const Json& step, const Json& expect) {
        auto batch = app_.generate_recipes(session_id_, step.value("count", 3), call(step));
        show(service::recipe_batch_json(batch));
        auto session = app_.get_session(session_id_);
        std::set<std::string> pantry;
        for (const auto& ing : session.ingredients) pantry.insert(ing.canonical_key());
        std::set<std::string> offered;
        for (const auto& r : session.offered_recipes) offered.insert(r.id);

        last_batch_.clear();
        for (std::size_t i = 0; i < batch.generation.recipes.size(); ++i) {
            const Recipe& r = batch.generation.recipes[i];
            last_batch_.push_back(r.id);
            if (!batch.validations[i].ok) fail(r.title + " offered despite failing validation");
            if (!batch.allergens[i].safe()) fail(r.title + " offered despite an allergen hit");
            // Re-derived here rather than trusting the engine's own reports.
            for (const auto& req : r.required) {
                if (!pantry.count(req.canonical_key) && !staples_.count(req.canonical_key)) {
                    fail(r.title + " needs " + req.canonical_key + " which is not in the pantry");
                }
            }
            const auto& n = r.nutrition;
            if (!n.calories || !n.fat_g || !n.carbohydrates_g || !n.protein_g) {
                fail(r.title + " lacks core nutrition");
            }
            for (const auto& allergy : profile_.allergies) {
                std::string a = canonicalize(allergy);
                for (const auto& req : r.required) {
                    if (overlaps(a, req.canonical_key)) fail(r.title + " uses " + req.canonical_key + " despite " + a);
                }
                for (const auto& declared : r.allergens) {
                    if (overlaps(a, canonicalize(declared))) fail(r.title + " declares " + declared + " despite " + a);
                }
            }
            if (!offered.count(r.id)) fail(r.title + " missing from offered recipes");
        }
        std::vector<std::string> rejected;
        for (const auto& rej : batch.generation.rejected) {
            rejected.push_back(rej.recipe.title);
            for (const auto& r : session.offered_recipes) {
                if (r.title == rej.recipe.title) fail("rejected " + r.title + " reached offered recipes");
            }
            out_ << "    discarded " << rej.recipe.title << "\n";
        }
        summary_.valid_recipes += static_cast<int>(batch.generation.recipes.size());
        summary_.rejected_recipes += static_cast<int>(rejected.size());
        expect_eq(expect, "recipes", batch.generation.recipes.size());
        expect_eq(expect, "rejected", rejected);
        expect_eq(expect, "shortfall", batch.generation.shortfall);
    }

    void select(const Json& step) {
        std::string id = recipe_ref(step);
        auto session = app_.select_recipe(session_id_, id);
        if (session.selected_recipe != id) fail("selection not recorded");
        for (const auto& r : session.offered_recipes) {
            if (r.id == id) summary_.selected = r.title;
        }
        out_ << "    selected " << summary_.selected << " (" << id << ")\n";
    }

    void rate(const Json& step) {
        auto recipe = app_.rate_recipe(session_id_, recipe_ref(step), step["stars"].get<int>());
        show(recipe);
        if (recipe.rating != step["stars"].get<int>()) fail("rating not recorded");
    }

    void chat(const Json& step, const Json& expect) {
        auto modality = parse_modality(step.value("modality", "text"));
        if (!modality) throw setup("unknown modality", step.value("modality", ""));
        auto before = app_.get_session(session_id_).chat_history.size();
        auto reply = app_.chat(session_id_, step["text"].get<std::string>(), *modality, call(step));
        out_ << "    user: " << step["text"].get<std::string>() << "\n";
        show(reply);
        auto history = app_.get_session(session_id_).chat_history;
        if (history.size() != before + 2) fail("chat history did not grow by one exchange");
        if (reply.role != Role::assistant || reply.content.empty()) fail("no assistant reply");
        if (reply.modality != *modality) fail("reply modality differs from the question");
        ++summary_.chats;
        if (expect.contains("contains") &&
            reply.content.find(expect["contains"].get<std::string>()) == std::string::npos) {
            fail("reply lacks " + expect["contains"].dump());
        }
    }

    void step_check(const Json& step, const Json& expect) {
        int index = step.value("step_index", 0);
        auto feedback = app_.step_check(session_id_, recipe_ref(step), index, snapshot(step), call(step));
        show(feedback);
        if (feedback.step_index != index) fail("feedback is for another step");
        if (feedback.explanation.empty()) fail("empty explanation");
        summary_.verdicts.emplace_back(to_string(feedback.verdict));
        expect_eq(expect, "verdict", std::string(to_string(feedback.verdict)));
    }

    void shopping(const Json& step, const Json& expect) {
        std::string id = recipe_ref(step);
        auto items = app_.shopping_list(session_id_, id);
        show(service::shopping_list_json(id, items));
        auto session = app_.get_session(session_id_);
        std::set<std::string> pantry;
        for (const auto& ing : session.ingredients) pantry.insert(ing.canonical_key());
        std::vector<std::string> keys;
        for (const auto& item : items) keys.push_back(item.canonical_key);
        std::vector<std::string> derived;
        for (const auto& r : session.offered_recipes) {
            if (r.id != id) continue;
            for (const auto& req : r.required) {
                if (!pantry.count(req.canonical_key)) derived.push_back(req.canonical_key);
            }
        }
        if (keys != derived) fail("shopping list " + join(keys, ",") + " differs from " + join(derived, ","));
        summary_.shopping_list = keys;
        expect_eq(expect, "items", keys);
    }

    const Scenario& scenario_;
    service::App& app_;
    fs::path snapshots_;
    std::ostream& out_;
    std::set<std::string> staples_;
    UserProfile profile_;
    std::string session_id_;
    std::string step_;
    std::vector<std::string> last_batch_;
    std::vector<std::string> failures_;
    DemoSummary summary_;
};

void check_step(const Json& step, std::size_t index) {
    std::string where = "step " + std::to_string(index + 1);
    if (!step.is_object() || !step.contains("op") || !step["op"].is_string()) {
        throw setup(where + " has no op", where);
    }
    std::string op = step["op"];
    if (!model_ops.count(op) && !plain_ops.count(op)) throw setup(where + ": unknown op " + op, where);
    auto need = [&](const char* key) {
        if (!step.contains(key) || !step[key].is_string()) {
            throw setup(where + " (" + op + ") needs a string \"" + key + "\"", where);
        }
    };
    if (model_ops.count(op)) need("fixture");
    if (uses_snapshot(op)) need("snapshot");
    if (op == "edit") {
        need("action");
        need("name");
        if (step["action"] != "add" && step["action"] != "remove") {
            throw setup(where + ": action must be add or remove", where);
        }
    }
    if (op == "chat") need("text");
    if (op == "rate" && (!step.contains("stars") || !step["stars"].is_number_integer())) {
        throw setup(where + " (rate) needs integer stars", where);
    }
    if ((op == "select" || op == "rate") && !step.contains("recipe")) {
        throw setup(where + " (" + op + ") needs a recipe index or title", where);
    }
}

} // namespace

Scenario load_scenario(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw setup("cannot read scenario " + path.string(), path.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::exception& e) {
        throw setup("scenario " + path.string() + " is not JSON: " + e.what(), path.string());
    }
    Scenario s;
    try {
        s.name = doc.value("name", path.stem().string());
        if (doc.contains("profile")) {
            Json p = doc["profile"];
            if (!p.contains("id")) p["id"] = "prf-demo";
            s.profile = p.get<UserProfile>();
        }
        if (doc.contains("viewport")) {
            s.viewport = {doc["viewport"].at("width_px").get<int>(), doc["viewport"].at("height_px").get<int>()};
        }
        s.staples = doc.value("staples", std::vector<std::string>{});
        s.steps = doc.at("steps").get<std::vector<Json>>();
    } catch (const Error& e) {
        throw setup("scenario " + path.string() + ": " + e.what(), e.subject());
    } catch (const Json::exception& e) {
        throw setup("scenario " + path.string() + ": " + e.what(), path.string());
    }
    if (s.viewport.width_px <= 0 || s.viewport.height_px <= 0) throw setup("viewport must be positive");
    if (s.steps.empty()) throw setup("scenario has no steps", path.string());
    for (std::size_t i = 0; i < s.steps.size(); ++i) check_step(s.steps[i], i);
    return s;
}

fs::path resolve_scenario(const std::string& name_or_path, const fs::path& scenarios_dir) {
    fs::path direct(name_or_path);
    if (fs::is_regular_file(direct)) return direct;
    fs::path named = scenarios_dir / (name_or_path + ".json");
    if (fs::is_regular_file(named)) return named;
    throw setup("no scenario " + name_or_path + " (looked in " + scenarios_dir.string() + ")", name_or_path);
}

void check_fixtures(const Scenario& scenario, const fs::path& fixtures_dir) {
    if (!fs::is_directory(fixtures_dir)) {
        throw setup("fixtures directory " + fixtures_dir.string() + " does not exist", fixtures_dir.string());
    }
    for (const auto& step : scenario.steps) {
        std::string op = step["op"];
        auto it = model_ops.find(op);
        if (it == model_ops.end()) continue;
        std::string file = it->second + "__" + step["fixture"].get<std::string>();
        if (!fs::is_regular_file(fixtures_dir / file)) throw setup("missing fixture " + file, file);
        if (uses_snapshot(op)) {
            fs::path snap = fixtures_dir / "snapshots" / step["snapshot"].get<std::string>();
            if (!fs::is_regular_file(snap)) throw setup("missing snapshot " + snap.string(), snap.string());
        }
    }
}

DemoOutcome run_demo(const Scenario& scenario, const fs::path& fixtures_dir, const fs::path& catalog_dir,
                     std::ostream& out) {
    check_fixtures(scenario, fixtures_dir);
    fs::path scratch = fs::temp_directory_path() / ("souschef-demo-" + make_id("d"));
    fs::create_directories(scratch);
    struct Cleanup {
        fs::path dir;
        ~Cleanup() {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    } cleanup{scratch};

    service::ServiceConfig config;
    config.fixtures_dir = fixtures_dir;
    config.catalog_dir = catalog_dir;
    config.store_path = scratch / "store.jsonl";
    config.staples = scenario.staples;
    service::check_config(config);
    auto provider = std::make_shared<llm::MockProvider>(fixtures_dir);

    DemoOutcome outcome;
    std::string session_id;
    PantrySession final_session;
    {
        service::App app(config, provider);
        Runner runner(scenario, app, fixtures_dir, out);
        outcome = runner.run();
        session_id = runner.session_id();
        final_session = app.get_session(session_id);
    }
    // The journal alone must reproduce the session.
    service::App reopened(config, provider);
    if (!reopened.load_errors().empty() || reopened.get_session(session_id) != final_session) {
        outcome.failures.push_back("session did not survive a restart");
        out << "FAIL session did not survive a restart\n";
    } else {
        out << "restart: session " << session_id << " reloaded intact\n";
    }
    return outcome;
}

std::string format_summary(const DemoSummary& s) {
    return "summary: scanned=" + std::to_string(s.scanned) + " edits=" + std::to_string(s.manual_edits) +
           " recipes=" + std::to_string(s.valid_recipes) + " rejected=" + std::to_string(s.rejected_recipes) +
           " selected=" + (s.selected.empty() ? "-" : s.selected) + " chats=" + std::to_string(s.chats) +
           " verdicts=" + (s.verdicts.empty() ? "-" : join(s.verdicts, ",")) +
           " shopping_list=" + (s.shopping_list.empty() ? "-" : join(s.shopping_list, ","));
}

} // namespace souschef::cli
