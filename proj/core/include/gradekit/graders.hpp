#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gradekit/corpus.hpp"
#include "gradekit/gateway.hpp"
#include "gradekit/schema.hpp"
#include "gradekit/syntax.hpp"
#include "gradekit/trace.hpp"

namespace gradekit {

struct ModelSpec {
    std::string model_id = "mock-grader";
    double temperature = 0.0;
    int max_output = 4096;
};

struct EnsembleConfig {
    std::vector<ModelSpec> members = {ModelSpec{}};
    std::optional<std::string> approach_identifier_model;
    double confidence_floor = 0.8;

    void validate() const;
    bool even_sized() const { return members.size() % 2 == 0; }
};

/// Everything that influences a grading run. Its fingerprint is stamped onto
/// every trace so reruns with drifted parameters cannot be confused with the
/// original.
struct GradingConfig {
    Technique technique = Technique::Cre;
    ModelSpec model;
    EnsembleConfig ensemble;
    double pre_failure_threshold = 0.0;  // fraction of leaves allowed to fail
    Rational qa_scale{4};                // R_E for QA methodwise grading
    PenaltyPolicy penalty;
    std::optional<ToolchainConfig> toolchain;
    int concurrency = 1;

    std::string fingerprint() const;
};

/// Per-criterion vote: the strict-majority value when one exists, otherwise
/// the member mean rounded half away from zero.
Rational ensemble_vote(const std::vector<Rational>& member_scores);

/// Whole-rubric single-call grading; logic-only, syntax handled by the
/// compiler agent.
EvaluationTrace grade_cre(const Problem& problem, const SubmissionRecord& record,
                          const CompileOutcome& compile_outcome, Gateway& gateway,
                          const GradingConfig& config);

/// One YES/NO call per rubric leaf; no partial credit per leaf.
EvaluationTrace grade_pre(const Problem& problem, const SubmissionRecord& record,
                          const CompileOutcome& compile_outcome, Gateway& gateway,
                          const GradingConfig& config);

/// Ensemble grading: optional approach identification, per-criterion
/// majority-then-rounded-mean vote, representative feedback from the member
/// whose reported total is closest to the ensemble total.
EvaluationTrace grade_eme(const Problem& problem, const SubmissionRecord& record,
                          Gateway& gateway, const GradingConfig& config);

/// Question-agnostic five-category grading out of 100.
EvaluationTrace grade_fpm(const Problem& problem, const SubmissionRecord& record,
                          Gateway& gateway, const GradingConfig& config);

/// Question-agnostic holistic 0..R_E score per top-level rubric method;
/// conversion to the base scale happens downstream via scale_methodwise.
EvaluationTrace grade_qa_methodwise(const Problem& problem, const SubmissionRecord& record,
                                    Gateway& gateway, const GradingConfig& config);

/// Dispatch on config.technique; compiles the submission first when a
/// toolchain is configured and the technique feeds a compiler transcript to
/// the model.
EvaluationTrace grade_submission(const Problem& problem, const SubmissionRecord& record,
                                 Gateway& gateway, const GradingConfig& config);

/// Grades every submission of every problem, in parallel up to
/// config.concurrency. Results come back in corpus order regardless of
/// scheduling.
std::vector<EvaluationTrace> grade_corpus(const Corpus& corpus, Gateway& gateway,
                                          const GradingConfig& config);

}  // namespace gradekit
