#include "souschef/service/views.hpp"

namespace souschef::service {

Json pantry_json(const PantrySession& session) { return Json(session.ingredients); }

Json scan_json(const ScanOutcome& outcome) {
    Json labels = Json::array();
    for (const auto& placed : outcome.labels) {
        Json item = placed.label;
        const auto& r = placed.placement.rect_px;
        const auto& a = placed.placement.anchor_px;
        item["rect_px"] = {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
        item["anchor_px"] = {{"x", a.x}, {"y", a.y}};
        labels.push_back(std::move(item));
    }
    return Json{{"labels", std::move(labels)},
                {"dropped_count", outcome.dropped_count},
                {"warning", outcome.warning},
                {"pantry", pantry_json(outcome.session)}};
}

Json validation_json(const recipes::ValidationReport& report) {
    return Json{{"recipe_id", report.recipe_id},
                {"ok", report.ok},
                {"missing_ingredients", report.missing_ingredients},
                {"nutrition_complete", report.nutrition_complete},
                {"schema_errors", report.schema_errors}};
}

Json allergen_json(const recipes::AllergenReport& report) {
    Json hits = Json::array();
    for (const auto& h : report.hits) {
        hits.push_back({{"allergen", h.allergen},
                        {"matched_in", recipes::to_string(h.matched_in)},
                        {"matched", h.matched}});
    }
    return Json{{"recipe_id", report.recipe_id}, {"safe", report.safe()}, {"hits", std::move(hits)}};
}

Json rejection_json(const recipes::RecipeRejection& rejection) {
    return Json{{"recipe", rejection.recipe},
                {"validation", validation_json(rejection.validation)},
                {"allergens", allergen_json(rejection.allergens)}};
}

Json recipe_batch_json(const RecipeBatch& batch) {
    Json reports = Json::array();
    for (std::size_t i = 0; i < batch.generation.recipes.size(); ++i) {
        reports.push_back({{"validation", validation_json(batch.validations[i])},
                           {"allergens", allergen_json(batch.allergens[i])}});
    }
    Json rejected = Json::array();
    for (const auto& r : batch.generation.rejected) rejected.push_back(rejection_json(r));
    return Json{{"recipes", batch.generation.recipes},
                {"reports", std::move(reports)},
                {"rejected", std::move(rejected)},
                {"shortfall", batch.generation.shortfall}};
}

Json shopping_list_json(const std::string& recipe_id, const std::vector<RequiredIngredient>& items) {
    return Json{{"recipe_id", recipe_id}, {"items", items}};
}

Json error_json(const Error& error) {
    Json body{{"kind", to_string(error.kind())}, {"message", error.what()}};
    if (!error.subject().empty()) body["subject"] = error.subject();
    if (error.attempts() > 0) body["attempts"] = error.attempts();
    if (const auto* none = dynamic_cast<const recipes::NoValidRecipesError*>(&error)) {
        Json rejected = Json::array();
        for (const auto& r : none->rejections()) rejected.push_back(rejection_json(r));
        body["rejected"] = std::move(rejected);
    }
    return Json{{"error", std::move(body)}};
}

int http_status(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_name:
    case ErrorKind::invalid_input:
    case ErrorKind::out_of_range:
    case ErrorKind::invalid_step:
        return 400;
    case ErrorKind::not_found:
    case ErrorKind::missing_key:
        return 404;
    case ErrorKind::precondition:
    case ErrorKind::invalid_state:
        return 409;
    case ErrorKind::no_valid_recipes:
        return 422;
    case ErrorKind::rate_limit_exhausted:
        return 503;
    case ErrorKind::provider_rejection:
    case ErrorKind::no_payload:
    case ErrorKind::schema_violation:
        return 502;
    case ErrorKind::timeout:
        return 504;
    case ErrorKind::template_error:
    case ErrorKind::incomplete_data:
    case ErrorKind::load_error:
    case ErrorKind::setup_error:
    case ErrorKind::io_error:
        return 500;
    }
    return 500;
}

} // namespace souschef::service
