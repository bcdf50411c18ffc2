#include "gradekit/trace.hpp"

#include "gradekit/errors.hpp"
#include "gradekit/rubric.hpp"

namespace gradekit {

nlohmann::json trace_to_json(const EvaluationTrace& trace) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["student_id"] = trace.student_id;
    doc["problem_id"] = trace.problem_id;
    doc["technique"] = to_string(trace.technique);

    nlohmann::json criteria = nlohmann::json::object();
    for (const auto& [path, result] : trace.per_criterion) {
        criteria[path] = {{"marks", rational_to_json(result.marks)},
                          {"feedback", result.feedback}};
    }
    doc["per_criterion"] = criteria;

    if (trace.method_scores) {
        nlohmann::json methods = nlohmann::json::object();
        for (const auto& [method, score] : *trace.method_scores)
            methods[method] = rational_to_json(score);
        doc["method_scores"] = methods;
    }
    if (trace.syntax_score) doc["syntax_score"] = rational_to_json(*trace.syntax_score);
    if (trace.syntax_max) doc["syntax_max"] = rational_to_json(*trace.syntax_max);
    if (trace.approach) {
        doc["approach"] = {{"identified", trace.approach->approach},
                           {"confidence", trace.approach->confidence},
                           {"reasoning", trace.approach->reasoning}};
    }
    if (trace.flagged_low_confidence) doc["flagged_low_confidence"] = true;
    if (!trace.failed_criteria.empty()) doc["failed_criteria"] = trace.failed_criteria;
    doc["raw_responses"] = trace.raw_responses;
    if (!trace.response_cached.empty()) doc["response_cached"] = trace.response_cached;
    doc["config_fingerprint"] = trace.config_fingerprint;
    return doc;
}

EvaluationTrace trace_from_json(const nlohmann::json& doc) {
    EvaluationTrace trace;
    trace.student_id = doc.at("student_id").get<std::string>();
    trace.problem_id = doc.value("problem_id", "");
    trace.technique = technique_from_string(doc.at("technique").get<std::string>());
    for (const auto& [path, entry] : doc.at("per_criterion").items()) {
        CriterionResult result;
        result.marks = rational_from_json(entry.at("marks"));
        result.feedback = entry.value("feedback", "");
        trace.per_criterion.emplace(path, std::move(result));
    }
    if (doc.contains("method_scores")) {
        std::map<std::string, Rational> methods;
        for (const auto& [method, score] : doc.at("method_scores").items())
            methods.emplace(method, rational_from_json(score));
        trace.method_scores = std::move(methods);
    }
    if (doc.contains("syntax_score"))
        trace.syntax_score = rational_from_json(doc.at("syntax_score"));
    if (doc.contains("syntax_max")) trace.syntax_max = rational_from_json(doc.at("syntax_max"));
    if (doc.contains("approach")) {
        ApproachIdentification id;
        id.approach = doc.at("approach").at("identified").get<std::string>();
        id.confidence = doc.at("approach").at("confidence").get<double>();
        id.reasoning = doc.at("approach").value("reasoning", "");
        trace.approach = std::move(id);
    }
    trace.flagged_low_confidence = doc.value("flagged_low_confidence", false);
    if (doc.contains("failed_criteria"))
        trace.failed_criteria = doc.at("failed_criteria").get<std::vector<std::string>>();
    if (doc.contains("raw_responses"))
        trace.raw_responses = doc.at("raw_responses").get<std::vector<std::string>>();
    if (doc.contains("response_cached"))
        trace.response_cached = doc.at("response_cached").get<std::vector<bool>>();
    trace.config_fingerprint = doc.value("config_fingerprint", "");
    return trace;
}

nlohmann::json ground_truth_to_json(const GroundTruth& truth) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["student_id"] = truth.student_id;
    nlohmann::json marks = nlohmann::json::object();
    for (const auto& [path, value] : truth.per_criterion_marks)
        marks[path] = rational_to_json(value);
    doc["per_criterion_marks"] = marks;
    doc["total"] = rational_to_json(truth.total);
    nlohmann::json feedback = nlohmann::json::object();
    for (const auto& [path, text] : truth.feedback) feedback[path] = text;
    doc["feedback"] = feedback;
    return doc;
}

GroundTruth ground_truth_from_json(const nlohmann::json& doc) {
    GroundTruth truth;
    truth.student_id = doc.at("student_id").get<std::string>();
    for (const auto& [path, value] : doc.at("per_criterion_marks").items())
        truth.per_criterion_marks.emplace(path, rational_from_json(value));
    truth.total = rational_from_json(doc.at("total"));
    if (doc.contains("feedback"))
        for (const auto& [path, text] : doc.at("feedback").items())
            truth.feedback.emplace(path, text.get<std::string>());
    return truth;
}

}  // namespace gradekit
