#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>

#include "gradekit/corpus.hpp"
#include "gradekit/gateway.hpp"

namespace gradekit {

/// Stable identity of a prompt: hash of (model, system, user), so ensemble
/// members receiving the same messages still script independently. Script
/// files key canned replies by this.
std::string prompt_fingerprint(const BackendRequest& request);

/// Deterministic scripted backend. Resolution order per request:
///   1. the sequence queue (consumed in order, any prompt),
///   2. the fingerprint script ("*" is a catch-all entry),
///   3. the fallback backend if configured,
///   4. UnknownPromptError (strict mode).
class MockBackend : public Backend {
public:
    MockBackend() = default;
    explicit MockBackend(std::shared_ptr<Backend> fallback) : fallback_(std::move(fallback)) {}

    void script(const std::string& fingerprint, std::string raw_text);
    void script_for(const BackendRequest& request, std::string raw_text);
    void push_sequence(std::string raw_text);

    BackendResponse complete(const BackendRequest& request) override;

private:
    std::map<std::string, std::string> scripted_;
    std::deque<std::string> sequence_;
    std::shared_ptr<Backend> fallback_;
    std::mutex mutex_;
};

/// Synthesizes the perfect reply for any grader prompt straight from corpus
/// ground truth: the oracle backend. A pipeline run against it must
/// reproduce every GroundTruth total exactly.
class GroundTruthBackend : public Backend {
public:
    explicit GroundTruthBackend(std::shared_ptr<const Corpus> corpus);

    /// Overrides the approach-identification confidence for one student
    /// (tests of the confidence analytics use this).
    void set_confidence(const std::string& student_id, double confidence);

    BackendResponse complete(const BackendRequest& request) override;

private:
    const SubmissionRecord& locate_submission(const std::string& user_message) const;
    const Problem& problem_of(const SubmissionRecord& record) const;

    std::string answer_cre(const Problem& problem, const SubmissionRecord& record) const;
    std::string answer_pre(const Problem& problem, const SubmissionRecord& record,
                           const std::string& user_message) const;
    std::string answer_eme_identify(const Problem& problem, const SubmissionRecord& record) const;
    std::string answer_eme_evaluate(const Problem& problem, const SubmissionRecord& record) const;
    std::string answer_fpm(const Problem& problem, const SubmissionRecord& record) const;
    std::string answer_qa_method(const Problem& problem, const SubmissionRecord& record,
                                 const std::string& user_message) const;

    std::shared_ptr<const Corpus> corpus_;
    std::map<std::string, double> confidence_;
};

/// Deterministic pseudo token accounting for offline backends.
TokenUsage mock_usage(const BackendRequest& request, const std::string& reply);

}  // namespace gradekit
