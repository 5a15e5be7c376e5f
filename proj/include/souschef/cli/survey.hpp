#pragma once

#include "souschef/core/model.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace souschef::cli {

// A mean kept as an exact fraction; shown to 3 decimals, rounded half-up.
struct Mean {
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;

    // round_half_up(1000 * numerator / denominator)
    std::int64_t thousandths() const;
    std::string to_string() const;
    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
    bool operator==(const Mean&) const = default;
};

struct QuestionScore {
    int sum = 0;
    Mean mean;
    bool operator==(const QuestionScore&) const = default;
};

struct SurveyReport {
    int round = 0;
    SurveySection section = SurveySection::usability;
    int n_participants = 0;
    std::map<std::string, QuestionScore> per_question;
    // Unweighted mean of the per-question means.
    Mean section_mean;
    bool operator==(const SurveyReport&) const = default;
};

// Parses CSV with the header participant_id,round,section,question_id,score.
// Throws Error{invalid_input} naming the offending line.
std::vector<LikertResponse> read_survey_csv(std::istream& in);

// Throws Error{invalid_input} for responses from another round or section,
// Error{out_of_range} for scores outside 1..5, and Error{incomplete_data}
// naming "participant/question" when an answer is missing or duplicated.
SurveyReport aggregate_survey(const std::vector<LikertResponse>& responses, int round,
                              SurveySection section);

// Keeps the responses for one round and section.
std::vector<LikertResponse> select_responses(const std::vector<LikertResponse>& responses,
                                             int round, SurveySection section);

std::string format_report(const SurveyReport& report);

} // namespace souschef::cli
