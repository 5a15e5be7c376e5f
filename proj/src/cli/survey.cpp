#include "souschef/cli/survey.hpp"

#include "souschef/error.hpp"

#include <charconv>
#include <set>
#include <sstream>

namespace souschef::cli {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_int(const std::string& s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

std::int64_t Mean::thousandths() const {
    // floor((2000 n + d) / 2d) for non-negative n and positive d
    return (2000 * numerator + denominator) / (2 * denominator);
}

std::string Mean::to_string() const {
    std::int64_t t = thousandths();
    std::string frac = std::to_string(t % 1000);
    return std::to_string(t / 1000) + "." + std::string(3 - frac.size(), '0') + frac;
}

std::vector<LikertResponse> read_survey_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto bad = [&](const std::string& what) {
        return Error(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": " + what,
                     "line " + std::to_string(line_no));
    };
    std::vector<LikertResponse> out;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split(line);
        if (!header_seen) {
            const std::vector<std::string> header{"participant_id", "round", "section", "question_id",
                                                  "score"};
            if (cells != header) {
                throw bad("expected header participant_id,round,section,question_id,score");
            }
            header_seen = true;
            continue;
        }
        if (cells.size() != 5) throw bad("expected 5 fields, got " + std::to_string(cells.size()));
        LikertResponse r;
        r.participant_id = cells[0];
        r.question_id = cells[3];
        if (r.participant_id.empty() || r.question_id.empty()) throw bad("blank participant or question");
        if (!parse_int(cells[1], r.round)) throw bad("round is not an integer: " + cells[1]);
        auto section = parse_section(cells[2]);
        if (!section) throw bad("unknown section: " + cells[2]);
        r.section = *section;
        if (!parse_int(cells[4], r.score)) throw bad("score is not an integer: " + cells[4]);
        out.push_back(std::move(r));
    }
    if (!header_seen) throw Error(ErrorKind::invalid_input, "survey file is empty");
    return out;
}

std::vector<LikertResponse> select_responses(const std::vector<LikertResponse>& responses,
                                             int round, SurveySection section) {
    std::vector<LikertResponse> out;
    for (const auto& r : responses) {
        if (r.round == round && r.section == section) out.push_back(r);
    }
    return out;
}

SurveyReport aggregate_survey(const std::vector<LikertResponse>& responses, int round,
                              SurveySection section) {
    std::set<std::string> participants;
    std::set<std::string> questions;
    std::map<std::pair<std::string, std::string>, int> answers;
    for (const auto& r : responses) {
        if (r.round != round || r.section != section) {
            throw Error(ErrorKind::invalid_input,
                        "response from round " + std::to_string(r.round) + " " +
                            std::string(to_string(r.section)) + " in a round " +
                            std::to_string(round) + " " + std::string(to_string(section)) + " survey",
                        r.participant_id + "/" + r.question_id);
        }
        if (r.score < 1 || r.score > 5) {
            throw Error(ErrorKind::out_of_range, "score must be 1..5, got " + std::to_string(r.score),
                        r.participant_id + "/" + r.question_id);
        }
        if (!answers.emplace(std::pair{r.participant_id, r.question_id}, r.score).second) {
            throw Error(ErrorKind::incomplete_data,
                        "duplicate answer from " + r.participant_id + " to " + r.question_id,
                        r.participant_id + "/" + r.question_id);
        }
        participants.insert(r.participant_id);
        questions.insert(r.question_id);
    }
    if (answers.empty()) {
        throw Error(ErrorKind::incomplete_data,
                    "no responses for round " + std::to_string(round) + " " + std::string(to_string(section)));
    }
    for (const auto& p : participants) {
        for (const auto& q : questions) {
            if (!answers.count({p, q})) {
                throw Error(ErrorKind::incomplete_data, p + " did not answer " + q, p + "/" + q);
            }
        }
    }

    SurveyReport report;
    report.round = round;
    report.section = section;
    report.n_participants = static_cast<int>(participants.size());
    const std::int64_t n = report.n_participants;
    std::int64_t total = 0;
    for (const auto& q : questions) {
        int sum = 0;
        for (const auto& p : participants) sum += answers.at({p, q});
        report.per_question[q] = {sum, {sum, n}};
        total += sum;
    }
    // Every question has n answers, so the mean of means is total / (n * Q).
    report.section_mean = {total, n * static_cast<std::int64_t>(questions.size())};
    return report;
}

std::string format_report(const SurveyReport& report) {
    std::ostringstream out;
    out << "round " << report.round << " " << to_string(report.section) << ": "
        << report.n_participants << " participants, " << report.per_question.size() << " questions\n";
    for (const auto& [q, score] : report.per_question) {
        out << q << " " << score.mean.to_string() << " (sum " << score.sum << ")\n";
    }
    out << "section " << report.section_mean.to_string() << "\n";
    return out.str();
}

} // namespace souschef::cli
