#include "souschef/service/app.hpp"

#include "souschef/assistant/assistant.hpp"
#include "souschef/error.hpp"

namespace souschef::service {

namespace {

Error not_found(const std::string& what, const std::string& id) {
    return Error(ErrorKind::not_found, what + " " + id + " does not exist", id);
}

void check_profile(const UserProfile& p) {
    if (p.cooking_level < 1 || p.cooking_level > 5) {
        throw Error(ErrorKind::invalid_input, "cooking_level must be 1-5", "cooking_level");
    }
}

const Recipe& offered(const PantrySession& session, const std::string& recipe_id) {
    const Recipe* recipe = session.find_recipe(recipe_id);
    if (!recipe) throw not_found("recipe", recipe_id);
    return *recipe;
}

} // namespace

App::App(ServiceConfig config, std::shared_ptr<const llm::Provider> provider, Clock clock)
    : config_(std::move(config)),
      gateway_(std::move(provider)),
      catalog_(i18n::Catalog::load(config_.catalog_dir)),
      staples_(config_.staples),
      clock_(std::move(clock)),
      journal_(config_.store_path) {
    auto loaded = journal_.load();
    load_errors_ = std::move(loaded.errors);
    profiles_ = std::move(loaded.contents.profiles);
    for (auto& [id, session] : loaded.contents.sessions) {
        remember_ratings(session);
        auto s = std::make_shared<SessionSlot>();
        s->session = std::move(session);
        sessions_.emplace(id, std::move(s));
    }
    timers_ = std::move(loaded.contents.timers);
}

// ---- profiles ---------------------------------------------------------------

UserProfile App::create_profile(UserProfile profile) {
    check_profile(profile);
    profile.id = make_id("prf");
    std::unique_lock lock(profiles_mutex_);
    profiles_[profile.id] = profile;
    journal_.put(profile);
    return profile;
}

UserProfile App::get_profile(const std::string& id) const {
    std::shared_lock lock(profiles_mutex_);
    auto it = profiles_.find(id);
    if (it == profiles_.end()) throw not_found("profile", id);
    return it->second;
}

UserProfile App::update_profile(const std::string& id, UserProfile profile) {
    check_profile(profile);
    profile.id = id;
    std::unique_lock lock(profiles_mutex_);
    auto it = profiles_.find(id);
    if (it == profiles_.end()) throw not_found("profile", id);
    it->second = profile;
    journal_.put(profile);
    return profile;
}

// ---- sessions ---------------------------------------------------------------

std::shared_ptr<App::SessionSlot> App::slot(const std::string& session_id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw not_found("session", session_id);
    return it->second;
}

PantrySession App::create_session(const std::string& profile_id) {
    get_profile(profile_id);
    auto s = std::make_shared<SessionSlot>();
    s->session.id = make_id("ses");
    s->session.profile_id = profile_id;
    s->session.created_at = clock_();
    journal_.put(s->session);
    PantrySession copy = s->session;
    std::unique_lock lock(sessions_mutex_);
    sessions_.emplace(copy.id, std::move(s));
    return copy;
}

PantrySession App::get_session(const std::string& id) const {
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    return s->session;
}

ScanOutcome App::scan(const std::string& session_id, const perception::Snapshot& snapshot,
                      const perception::Viewport& viewport, const llm::CallOptions& call) {
    if (viewport.width_px <= 0 || viewport.height_px <= 0) {
        throw Error(ErrorKind::invalid_input, "viewport size must be positive", "viewport");
    }
    auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    UserProfile profile = get_profile(s->session.profile_id);

    auto detected = perception::detect_ingredients(gateway_, snapshot, profile.language, call);
    ScanOutcome out;
    out.dropped_count = detected.dropped_count;
    out.warning = detected.warning;
    for (const auto& label : detected.labels) {
        out.labels.push_back({label, perception::project_label(label.bbox, viewport)});
    }
    s->session = perception::merge_into_pantry(s->session, detected.labels, clock_());
    journal_.put(s->session);
    out.session = s->session;
    return out;
}

PantrySession App::edit_pantry(const std::string& session_id, const perception::PantryEdit& edit) {
    auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    s->session = perception::edit_pantry(s->session, edit, clock_());
    journal_.put(s->session);
    return s->session;
}

// ---- recipes ----------------------------------------------------------------

void App::remember_ratings(const PantrySession& session) {
    std::lock_guard lock(ratings_mutex_);
    auto& mine = ratings_[session.profile_id];
    for (const auto& r : session.offered_recipes) {
        if (r.rating) mine[r.id] = {r.title, *r.rating};
    }
}

std::vector<recipes::RatedRecipe> App::ratings_for(const std::string& profile_id) const {
    std::lock_guard lock(ratings_mutex_);
    std::vector<recipes::RatedRecipe> out;
    if (auto it = ratings_.find(profile_id); it != ratings_.end()) {
        for (const auto& [id, rated] : it->second) out.push_back(rated);
    }
    return out;
}

RecipeBatch App::generate_recipes(const std::string& session_id, int count,
                                  const llm::CallOptions& call) {
    auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    UserProfile profile = get_profile(s->session.profile_id);

    recipes::GenerationRequest request;
    request.count = count;
    request.staples = staples_;
    request.past_ratings = ratings_for(profile.id);
    request.call = call;

    RecipeBatch batch;
    batch.generation = recipes::generate_recipes(gateway_, s->session, profile, request);
    for (const auto& recipe : batch.generation.recipes) {
        batch.validations.push_back(recipes::validate_recipe(recipe, s->session.ingredients, staples_));
        batch.allergens.push_back(recipes::check_allergens(recipe, profile));
    }
    s->session = batch.generation.session;
    journal_.put(s->session);
    return batch;
}

PantrySession App::select_recipe(const std::string& session_id, const std::string& recipe_id) {
    auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    offered(s->session, recipe_id);
    s->session.selected_recipe = recipe_id;
    journal_.put(s->session);
    return s->session;
}

Recipe App::rate_recipe(const std::string& session_id, const std::string& recipe_id, int stars) {
    auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    s->session = recipes::rate_recipe(s->session, recipe_id, stars);
    journal_.put(s->session);
    remember_ratings(s->session);
    return offered(s->session, recipe_id);
}

std::vector<RequiredIngredient> App::shopping_list(const std::string& session_id,
                                                   const std::string& recipe_id) const {
    auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    return recipes::shopping_list(offered(s->session, recipe_id), s->session.ingredients);
}

// ---- assistant and step checks ------------------------------------------------

ChatTurn App::chat(const std::string& session_id, const std::string& text, Modality modality,
                   const llm::CallOptions& call) {
    auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    UserProfile profile = get_profile(s->session.profile_id);
    assistant::AskOptions options;
    options.history_budget = config_.history_budget;
    options.call = call;
    try {
        ChatTurn reply = assistant::ask(gateway_, s->session, profile, text, modality, options);
        journal_.put(s->session);
        return reply;
    } catch (const Error& e) {
        // The unanswered question stays in the history.
        if (e.kind() != ErrorKind::invalid_input) journal_.put(s->session);
        throw;
    }
}

StepFeedback App::step_check(const std::string& session_id, const std::string& recipe_id,
                             int step_index, const perception::Snapshot& snapshot,
                             const llm::CallOptions& call) {
    auto s = slot(session_id);
    std::lock_guard lock(s->mutex);
    UserProfile profile = get_profile(s->session.profile_id);
    const Recipe& recipe = offered(s->session, recipe_id);
    return perception::verify_step(gateway_, snapshot, recipe, step_index, profile.language, call);
}

// ---- timers -----------------------------------------------------------------

Timer App::create_timer(const std::string& session_id, const std::string& label, int duration_s) {
    slot(session_id);
    Timer t = start_timer(make_id("tmr"), session_id, label, duration_s, clock_());
    std::lock_guard lock(timers_mutex_);
    timers_[t.id] = t;
    journal_.put(t);
    return t;
}

Timer App::update_timer(const std::string& timer_id, const std::function<Timer(Timer)>& change) {
    std::lock_guard lock(timers_mutex_);
    auto it = timers_.find(timer_id);
    if (it == timers_.end()) throw not_found("timer", timer_id);
    Timer updated = change(it->second);
    // A running timer recomputes from its anchor after a restart, so only
    // state changes need a journal line.
    if (updated.state != it->second.state) journal_.put(updated);
    it->second = updated;
    return updated;
}

Timer App::get_timer(const std::string& timer_id) {
    Timestamp at = clock_();
    return update_timer(timer_id, [&](Timer t) { return advance(std::move(t), at); });
}

Timer App::pause_timer(const std::string& timer_id) {
    Timestamp at = clock_();
    return update_timer(timer_id, [&](Timer t) { return pause(std::move(t), at); });
}

Timer App::resume_timer(const std::string& timer_id) {
    Timestamp at = clock_();
    return update_timer(timer_id, [&](Timer t) { return resume(std::move(t), at); });
}

std::vector<Timer> App::session_timers(const std::string& session_id) {
    slot(session_id);
    Timestamp at = clock_();
    std::lock_guard lock(timers_mutex_);
    std::vector<Timer> out;
    for (auto& [id, timer] : timers_) {
        if (timer.session_id != session_id) continue;
        Timer updated = advance(timer, at);
        if (updated.state != timer.state) journal_.put(updated);
        timer = updated;
        out.push_back(timer);
    }
    return out;
}

void App::tick() {
    Timestamp at = clock_();
    std::lock_guard lock(timers_mutex_);
    for (auto& [id, timer] : timers_) {
        if (timer.state != TimerState::running) continue;
        Timer updated = advance(timer, at);
        if (updated.state != timer.state) journal_.put(updated);
        timer = updated;
    }
}

} // namespace souschef::service
