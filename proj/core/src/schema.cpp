#include "gradekit/schema.hpp"

#include "gradekit/errors.hpp"
#include "gradekit/rubric.hpp"

namespace gradekit {

namespace {

using Issue = std::optional<SchemaIssue>;

Issue issue(std::string path, std::string message) {
    return SchemaIssue{std::move(path), std::move(message)};
}

Issue check_number(const nlohmann::json& doc, const std::string& path, const char* key) {
    if (!doc.contains(key)) return issue(path + key, "missing");
    if (!doc.at(key).is_number()) return issue(path + key, "must be a number");
    return std::nullopt;
}

Issue check_unit_interval(const nlohmann::json& doc, const std::string& path, const char* key) {
    if (auto bad = check_number(doc, path, key)) return bad;
    const double v = doc.at(key).get<double>();
    if (v < 0.0 || v > 1.0) return issue(path + key, "must lie in [0, 1]");
    return std::nullopt;
}

Issue check_string(const nlohmann::json& doc, const std::string& path, const char* key) {
    if (!doc.contains(key)) return issue(path + key, "missing");
    if (!doc.at(key).is_string()) return issue(path + key, "must be a string");
    return std::nullopt;
}

Issue check_range(const nlohmann::json& doc, const std::string& path, const char* key,
                  double lo, double hi) {
    if (auto bad = check_number(doc, path, key)) return bad;
    const double v = doc.at(key).get<double>();
    if (v < lo || v > hi)
        return issue(path + key, "must lie in [" + std::to_string(lo) + ", " +
                                     std::to_string(hi) + "]");
    return std::nullopt;
}

// A CRE leaf is an object with "Marks"; every other object recurses.
Issue validate_cre_node(const nlohmann::json& node, const std::string& path) {
    if (node.is_number()) {
        if (node.get<double>() < 0) return issue(path, "negative marks");
        return std::nullopt;
    }
    if (!node.is_object()) return issue(path, "expected object or number");
    if (node.contains("Marks")) {
        if (!node.at("Marks").is_number()) return issue(path + "/Marks", "must be a number");
        if (node.at("Marks").get<double>() < 0) return issue(path + "/Marks", "negative marks");
        if (node.contains("Feedback") && !node.at("Feedback").is_string())
            return issue(path + "/Feedback", "must be a string");
        return std::nullopt;
    }
    for (const auto& [key, value] : node.items()) {
        if (key == "Feedback") continue;
        if (auto bad = validate_cre_node(value, path + "/" + key)) return bad;
    }
    return std::nullopt;
}

}  // namespace

std::optional<SchemaIssue> validate_schema(PromptKind kind, const nlohmann::json& value) {
    if (!value.is_object()) return issue("", "response must be a JSON object");

    switch (kind) {
        case PromptKind::Cre: {
            if (value.empty()) return issue("", "empty evaluation");
            return validate_cre_node(value, "");
        }

        case PromptKind::Pre: {
            if (auto bad = check_string(value, "", "DECISION")) return bad;
            const auto decision = value.at("DECISION").get<std::string>();
            if (decision != "YES" && decision != "NO")
                return issue("DECISION", "must be YES or NO");
            if (!value.contains("FEEDBACK")) return issue("FEEDBACK", "missing");
            return std::nullopt;
        }

        case PromptKind::EmeIdentify: {
            if (auto bad = check_string(value, "", "identified_approach")) return bad;
            if (auto bad = check_unit_interval(value, "", "confidence")) return bad;
            if (auto bad = check_string(value, "", "reasoning")) return bad;
            return std::nullopt;
        }

        case PromptKind::EmeEvaluate: {
            if (!value.contains("criteria_scores") || !value.at("criteria_scores").is_array())
                return issue("criteria_scores", "missing or not an array");
            const auto& arr = value.at("criteria_scores");
            if (arr.empty()) return issue("criteria_scores", "must not be empty");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string path = "criteria_scores[" + std::to_string(i) + "]/";
                const auto& item = arr[i];
                if (!item.is_object()) return issue(path, "must be an object");
                if (auto bad = check_string(item, path, "criterion")) return bad;
                if (auto bad = check_number(item, path, "score")) return bad;
                if (auto bad = check_number(item, path, "max_score")) return bad;
                if (item.at("score").get<double>() < 0)
                    return issue(path + "score", "negative score");
                if (item.at("score").get<double>() > item.at("max_score").get<double>())
                    return issue(path + "score", "score exceeds max_score");
                if (auto bad = check_string(item, path, "feedback")) return bad;
            }
            if (auto bad = check_number(value, "", "total_score")) return bad;
            if (auto bad = check_number(value, "", "max_possible_score")) return bad;
            if (auto bad = check_string(value, "", "overall_feedback")) return bad;
            if (auto bad = check_unit_interval(value, "", "approach_correctness")) return bad;
            if (auto bad = check_unit_interval(value, "", "code_correctness")) return bad;
            if (auto bad = check_unit_interval(value, "", "efficiency_rating")) return bad;
            if (auto bad = check_unit_interval(value, "", "readability_rating")) return bad;
            return std::nullopt;
        }

        case PromptKind::Fpm: {
            if (auto bad = check_range(value, "", "program_format", 0, 10)) return bad;
            if (auto bad = check_range(value, "", "time_complexity", 0, 15)) return bad;
            if (auto bad = check_range(value, "", "space_complexity", 0, 15)) return bad;
            if (auto bad = check_range(value, "", "correctness_general", 0, 30)) return bad;
            if (auto bad = check_range(value, "", "correctness_edge_cases", 0, 30)) return bad;
            return std::nullopt;
        }

        case PromptKind::QaMethod: {
            if (auto bad = check_number(value, "", "score")) return bad;
            if (value.at("score").get<double>() < 0) return issue("score", "negative score");
            return std::nullopt;
        }
    }
    return issue("", "unknown prompt kind");
}

PreDecision parse_pre(const nlohmann::json& value) {
    PreDecision out;
    out.yes = value.at("DECISION").get<std::string>() == "YES";
    const auto& fb = value.at("FEEDBACK");
    out.feedback = fb.is_string() ? fb.get<std::string>() : fb.dump();
    return out;
}

EmeIdentification parse_eme_identification(const nlohmann::json& value) {
    EmeIdentification out;
    out.identified_approach = value.at("identified_approach").get<std::string>();
    out.confidence = value.at("confidence").get<double>();
    out.reasoning = value.at("reasoning").get<std::string>();
    return out;
}

EmeEvaluation parse_eme_evaluation(const nlohmann::json& value) {
    EmeEvaluation out;
    for (const auto& item : value.at("criteria_scores")) {
        CriterionScore cs;
        cs.criterion = item.at("criterion").get<std::string>();
        cs.score = rational_from_json(item.at("score"));
        cs.max_score = rational_from_json(item.at("max_score"));
        cs.feedback = item.at("feedback").get<std::string>();
        out.criteria.push_back(std::move(cs));
    }
    out.total_score = rational_from_json(value.at("total_score"));
    out.max_possible_score = rational_from_json(value.at("max_possible_score"));
    out.overall_feedback = value.at("overall_feedback").get<std::string>();
    out.approach_correctness = value.at("approach_correctness").get<double>();
    out.code_correctness = value.at("code_correctness").get<double>();
    out.efficiency_rating = value.at("efficiency_rating").get<double>();
    out.readability_rating = value.at("readability_rating").get<double>();
    return out;
}

FpmScores parse_fpm(const nlohmann::json& value) {
    FpmScores out;
    out.program_format = rational_from_json(value.at("program_format"));
    out.time_complexity = rational_from_json(value.at("time_complexity"));
    out.space_complexity = rational_from_json(value.at("space_complexity"));
    out.correctness_general = rational_from_json(value.at("correctness_general"));
    out.correctness_edge_cases = rational_from_json(value.at("correctness_edge_cases"));
    if (value.contains("feedback") && value.at("feedback").is_string())
        out.feedback = value.at("feedback").get<std::string>();
    return out;
}

QaMethodScore parse_qa_method(const nlohmann::json& value, const Rational& scale_max) {
    QaMethodScore out;
    out.score = rational_from_json(value.at("score"));
    if (out.score.is_negative() || out.score > scale_max)
        throw SchemaViolationError("score", "outside [0, " + scale_max.to_string() + "]");
    if (value.contains("feedback") && value.at("feedback").is_string())
        out.feedback = value.at("feedback").get<std::string>();
    return out;
}

}  // namespace gradekit
