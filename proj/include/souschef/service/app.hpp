#pragma once

#include "souschef/core/model.hpp"
#include "souschef/i18n/catalog.hpp"
#include "souschef/llm/gateway.hpp"
#include "souschef/perception/perception.hpp"
#include "souschef/recipes/engine.hpp"
#include "souschef/service/config.hpp"
#include "souschef/service/store.hpp"
#include "souschef/service/timer.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

namespace souschef::service {

using Clock = std::function<Timestamp()>;

struct PlacedLabel {
    DetectionLabel label;
    perception::LabelPlacement placement;
};

struct ScanOutcome {
    std::vector<PlacedLabel> labels;
    int dropped_count = 0;
    bool warning = false;
    PantrySession session;
};

struct RecipeBatch {
    recipes::GenerationResult generation;
    // One of each per accepted recipe, same order.
    std::vector<recipes::ValidationReport> validations;
    std::vector<recipes::AllergenReport> allergens;
};

// Everything behind the HTTP API. Calls on different sessions run in
// parallel; calls on one session are serialized, model round trip included.
// Every mutation is written to the journal before the call returns.
class App {
public:
    App(ServiceConfig config, std::shared_ptr<const llm::Provider> provider, Clock clock = now);

    // Problems found while loading the store at construction.
    const std::vector<RecordError>& load_errors() const noexcept { return load_errors_; }
    const ServiceConfig& config() const noexcept { return config_; }
    const llm::Gateway& gateway() const noexcept { return gateway_; }
    const i18n::Catalog& catalog() const noexcept { return catalog_; }

    UserProfile create_profile(UserProfile profile);
    UserProfile get_profile(const std::string& id) const;
    UserProfile update_profile(const std::string& id, UserProfile profile);

    PantrySession create_session(const std::string& profile_id);
    PantrySession get_session(const std::string& id) const;

    ScanOutcome scan(const std::string& session_id, const perception::Snapshot& snapshot,
                     const perception::Viewport& viewport, const llm::CallOptions& call = {});
    PantrySession edit_pantry(const std::string& session_id, const perception::PantryEdit& edit);

    RecipeBatch generate_recipes(const std::string& session_id, int count,
                                 const llm::CallOptions& call = {});
    PantrySession select_recipe(const std::string& session_id, const std::string& recipe_id);
    Recipe rate_recipe(const std::string& session_id, const std::string& recipe_id, int stars);
    std::vector<RequiredIngredient> shopping_list(const std::string& session_id,
                                                  const std::string& recipe_id) const;

    ChatTurn chat(const std::string& session_id, const std::string& text, Modality modality,
                  const llm::CallOptions& call = {});
    StepFeedback step_check(const std::string& session_id, const std::string& recipe_id,
                            int step_index, const perception::Snapshot& snapshot,
                            const llm::CallOptions& call = {});

    Timer create_timer(const std::string& session_id, const std::string& label, int duration_s);
    Timer get_timer(const std::string& timer_id);
    Timer pause_timer(const std::string& timer_id);
    Timer resume_timer(const std::string& timer_id);
    std::vector<Timer> session_timers(const std::string& session_id);
    // Advances every running timer; called by the scheduler.
    void tick();

private:
    struct SessionSlot {
        mutable std::mutex mutex;
        PantrySession session;
    };

    std::shared_ptr<SessionSlot> slot(const std::string& session_id) const;
    void remember_ratings(const PantrySession& session);
    std::vector<recipes::RatedRecipe> ratings_for(const std::string& profile_id) const;
    Timer update_timer(const std::string& timer_id, const std::function<Timer(Timer)>& change);

    ServiceConfig config_;
    llm::Gateway gateway_;
    i18n::Catalog catalog_;
    recipes::StaplesPolicy staples_;
    Clock clock_;
    Journal journal_;
    std::vector<RecordError> load_errors_;

    mutable std::shared_mutex profiles_mutex_;
    std::map<std::string, UserProfile> profiles_;

    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;

    mutable std::mutex timers_mutex_;
    std::map<std::string, Timer> timers_;

    // profile id -> recipe id -> rating, across all of the profile's sessions.
    mutable std::mutex ratings_mutex_;
    std::map<std::string, std::map<std::string, recipes::RatedRecipe>> ratings_;
};

} // namespace souschef::service
