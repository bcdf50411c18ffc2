#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradekit/rational.hpp"
#include "gradekit/technique.hpp"

namespace gradekit {

struct Submission {
    std::string student_id;
    std::string source_path;
    std::string language_tag;
    std::string problem_id;
};

/// Consensus human grades for one submission: the base (B) side of every
/// comparison.
struct GroundTruth {
    std::string student_id;
    std::map<std::string, Rational> per_criterion_marks;  // label-path -> marks
    Rational total;
    std::map<std::string, std::string> feedback;
};

struct CriterionResult {
    Rational marks;
    std::string feedback;
};

/// Identified approach for multi-solution rubrics, with the model's
/// confidence in the identification.
struct ApproachIdentification {
    std::string approach;
    double confidence = 1.0;
    std::string reasoning;
};

/// One grader's full output for one submission: the persisted, auditable
/// record that every statistic downstream is computed from.
struct EvaluationTrace {
    std::string student_id;
    std::string problem_id;
    Technique technique = Technique::Cre;
    std::map<std::string, CriterionResult> per_criterion;   // label-path -> result
    std::optional<std::map<std::string, Rational>> method_scores;
    std::optional<Rational> syntax_score;
    std::optional<Rational> syntax_max;
    std::optional<ApproachIdentification> approach;
    bool flagged_low_confidence = false;
    std::vector<std::string> failed_criteria;  // PRE leaves that exhausted retries
    std::vector<std::string> raw_responses;
    std::vector<bool> response_cached;
    std::string config_fingerprint;

    /// Sum of per-criterion marks: the technique's logical total.
    Rational logical_total() const {
        Rational total(0);
        for (const auto& [path, result] : per_criterion) total += result.marks;
        return total;
    }
};

nlohmann::json trace_to_json(const EvaluationTrace& trace);
EvaluationTrace trace_from_json(const nlohmann::json& doc);

nlohmann::json ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& doc);

}  // namespace gradekit
