#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradekit/rational.hpp"
#include "gradekit/technique.hpp"

namespace gradekit {

/// nullopt = valid; otherwise the JSON-pointer-ish field path and what broke.
struct SchemaIssue {
    std::string field_path;
    std::string message;
};

/// Structural validation of a parsed model response against the technique's
/// JSON contract. Rubric-aware checks (unknown criterion, mark above a leaf
/// max) are layered on by the graders.
std::optional<SchemaIssue> validate_schema(PromptKind kind, const nlohmann::json& value);

// Typed views over already-validated responses.

struct PreDecision {
    bool yes = false;
    std::string feedback;
};
PreDecision parse_pre(const nlohmann::json& value);

struct EmeIdentification {
    std::string identified_approach;
    double confidence = 0.0;
    std::string reasoning;
};
EmeIdentification parse_eme_identification(const nlohmann::json& value);

struct CriterionScore {
    std::string criterion;
    Rational score;
    Rational max_score;
    std::string feedback;
};

struct EmeEvaluation {
    std::vector<CriterionScore> criteria;
    Rational total_score;
    Rational max_possible_score;
    std::string overall_feedback;
    double approach_correctness = 0.0;
    double code_correctness = 0.0;
    double efficiency_rating = 0.0;
    double readability_rating = 0.0;
};
EmeEvaluation parse_eme_evaluation(const nlohmann::json& value);

struct FpmScores {
    Rational program_format;
    Rational time_complexity;
    Rational space_complexity;
    Rational correctness_general;
    Rational correctness_edge_cases;
    std::string feedback;

    Rational total() const {
        return program_format + time_complexity + space_complexity + correctness_general +
               correctness_edge_cases;
    }
};
FpmScores parse_fpm(const nlohmann::json& value);

/// The five FPM category weights; they always sum to 100.
struct FpmWeights {
    Rational program_format{10};
    Rational time_complexity{15};
    Rational space_complexity{15};
    Rational correctness_general{30};
    Rational correctness_edge_cases{30};
};

struct QaMethodScore {
    Rational score;
    std::string feedback;
};
QaMethodScore parse_qa_method(const nlohmann::json& value, const Rational& scale_max);

}  // namespace gradekit
