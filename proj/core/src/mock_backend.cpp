#include "gradekit/mock_backend.hpp"

#include "gradekit/fingerprint.hpp"

namespace gradekit {

std::string prompt_fingerprint(const BackendRequest& request) {
    std::string material = request.model_id;
    material += '\x1f';
    material += request.system_message;
    material += '\x1f';
    material += request.user_message;
    return fingerprint_hex(material);
}

TokenUsage mock_usage(const BackendRequest& request, const std::string& reply) {
    TokenUsage usage;
    usage.input_tokens =
        static_cast<std::int64_t>((request.system_message.size() + request.user_message.size()) / 4);
    usage.output_tokens = static_cast<std::int64_t>(reply.size() / 4);
    return usage;
}

void MockBackend::script(const std::string& fingerprint, std::string raw_text) {
    std::lock_guard lock(mutex_);
    scripted_[fingerprint] = std::move(raw_text);
}

void MockBackend::script_for(const BackendRequest& request, std::string raw_text) {
    script(prompt_fingerprint(request), std::move(raw_text));
}

void MockBackend::push_sequence(std::string raw_text) {
    std::lock_guard lock(mutex_);
    sequence_.push_back(std::move(raw_text));
}

BackendResponse MockBackend::complete(const BackendRequest& request) {
    std::string reply;
    bool found = false;
    {
        std::lock_guard lock(mutex_);
        if (!sequence_.empty()) {
            reply = std::move(sequence_.front());
            sequence_.pop_front();
            found = true;
        } else if (auto it = scripted_.find(prompt_fingerprint(request)); it != scripted_.end()) {
            reply = it->second;
            found = true;
        } else if (auto any = scripted_.find("*"); any != scripted_.end()) {
            reply = any->second;
            found = true;
        }
    }
    if (!found) {
        if (fallback_) return fallback_->complete(request);
        throw UnknownPromptError("no scripted reply for prompt " + prompt_fingerprint(request));
    }
    BackendResponse response;
    response.raw_text = std::move(reply);
    response.usage = mock_usage(request, response.raw_text);
    response.latency_ms = 0;
    return response;
}

GroundTruthBackend::GroundTruthBackend(std::shared_ptr<const Corpus> corpus)
    : corpus_(std::move(corpus)) {
    if (!corpus_) throw UsageError("ground-truth backend needs a corpus");
}

void GroundTruthBackend::set_confidence(const std::string& student_id, double confidence) {
    confidence_[student_id] = confidence;
}

const SubmissionRecord& GroundTruthBackend::locate_submission(
    const std::string& user_message) const {
    // The prompt embeds the full submission; pick the longest code body that
    // appears verbatim. Longest wins so a submission that contains another
    // one as a prefix still resolves correctly.
    const SubmissionRecord* best = nullptr;
    for (const auto& problem : corpus_->problems) {
        for (const auto& record : problem.submissions) {
            if (record.code.empty()) continue;
            if (user_message.find(record.code) == std::string::npos) continue;
            if (!best || record.code.size() > best->code.size()) best = &record;
        }
    }
    if (!best)
        throw UnknownPromptError("prompt does not embed any known submission");
    return *best;
}

const Problem& GroundTruthBackend::problem_of(const SubmissionRecord& record) const {
    return corpus_->problem(record.meta.problem_id);
}

namespace {

double marks_as_number(const Rational& r) { return r.to_double(); }

nlohmann::json number_json(const Rational& r) {
    if (r.is_integer()) return r.numerator();
    return marks_as_number(r);
}

/// Label of the approach child whose subtree holds the ground-truth paths.
std::string identify_approach_from_truth(const Problem& problem, const GroundTruth& truth) {
    if (!problem.rubric.has_approach_alternatives()) return "";
    for (const auto& [path, marks] : truth.per_criterion_marks) {
        (void)marks;
        const auto parts = split_path(path);
        if (!parts.empty()) return parts.front();
    }
    return problem.rubric.children.empty() ? "" : problem.rubric.children.front().label;
}

}  // namespace

std::string GroundTruthBackend::answer_cre(const Problem& problem,
                                           const SubmissionRecord& record) const {
    nlohmann::json tree = nlohmann::json::object();
    for (const auto& [path, marks] : record.truth.per_criterion_marks) {
        nlohmann::json* node = &tree;
        for (const auto& part : split_path(path)) node = &((*node)[part]);
        (*node)["Marks"] = number_json(marks);
        const auto fb = record.truth.feedback.find(path);
        (*node)["Feedback"] = fb == record.truth.feedback.end() ? "" : fb->second;
    }
    (void)problem;
    return tree.dump(2);
}

std::string GroundTruthBackend::answer_pre(const Problem& problem, const SubmissionRecord& record,
                                           const std::string& user_message) const {
    const std::string marker = "Point to be evaluated: ";
    const auto start = user_message.find(marker);
    if (start == std::string::npos)
        throw UnknownPromptError("PRE prompt without evaluation point");
    auto end = user_message.find('\n', start);
    if (end == std::string::npos) end = user_message.size();
    const std::string path = user_message.substr(start + marker.size(), end - start - marker.size());

    const RubricNode& leaf = resolve_path(problem.rubric, path);
    const auto it = record.truth.per_criterion_marks.find(path);
    const Rational awarded = it == record.truth.per_criterion_marks.end() ? Rational(0) : it->second;
    const bool yes = awarded == leaf.max_marks;

    nlohmann::json doc;
    doc["DECISION"] = yes ? "YES" : "NO";
    const auto fb = record.truth.feedback.find(path);
    doc["FEEDBACK"] = fb == record.truth.feedback.end()
                          ? (yes ? "Implemented correctly." : "Logic for this point is missing.")
                          : fb->second;
    return doc.dump(2);
}

std::string GroundTruthBackend::answer_eme_identify(const Problem& problem,
                                                    const SubmissionRecord& record) const {
    nlohmann::json doc;
    doc["identified_approach"] = identify_approach_from_truth(problem, record.truth);
    const auto it = confidence_.find(record.meta.student_id);
    doc["confidence"] = it == confidence_.end() ? 1.0 : it->second;
    doc["reasoning"] = "Matches the graded approach in the reference assessment.";
    return doc.dump(2);
}

std::string GroundTruthBackend::answer_eme_evaluate(const Problem& problem,
                                                    const SubmissionRecord& record) const {
    nlohmann::json criteria = nlohmann::json::array();
    Rational total(0), max_total(0);
    for (const auto& [path, marks] : record.truth.per_criterion_marks) {
        const RubricNode& node = resolve_path(problem.rubric, path);
        nlohmann::json item;
        item["criterion"] = path;
        item["score"] = number_json(marks);
        item["max_score"] = number_json(node.max_marks);
        const auto fb = record.truth.feedback.find(path);
        item["feedback"] = fb == record.truth.feedback.end() ? "" : fb->second;
        criteria.push_back(std::move(item));
        total += marks;
        max_total += node.max_marks;
    }
    nlohmann::json doc;
    doc["criteria_scores"] = std::move(criteria);
    doc["total_score"] = number_json(total);
    doc["max_possible_score"] = number_json(max_total);
    doc["overall_feedback"] = "Scores mirror the reference assessment.";
    doc["approach_correctness"] = 1.0;
    doc["code_correctness"] = 1.0;
    doc["efficiency_rating"] = 1.0;
    doc["readability_rating"] = 1.0;
    return doc.dump(2);
}

std::string GroundTruthBackend::answer_fpm(const Problem& problem,
                                           const SubmissionRecord& record) const {
    const double fraction =
        (record.truth.total / problem.rubric.max_marks).to_double();
    nlohmann::json doc;
    doc["program_format"] = 10.0 * fraction;
    doc["time_complexity"] = 15.0 * fraction;
    doc["space_complexity"] = 15.0 * fraction;
    doc["correctness_general"] = 30.0 * fraction;
    doc["correctness_edge_cases"] = 30.0 * fraction;
    doc["feedback"] = "Category scores mirror the reference total.";
    return doc.dump(2);
}

std::string GroundTruthBackend::answer_qa_method(const Problem& problem,
                                                 const SubmissionRecord& record,
                                                 const std::string& user_message) const {
    const std::string marker = "Method to grade: ";
    const auto start = user_message.find(marker);
    if (start == std::string::npos)
        throw UnknownPromptError("method prompt without method name");
    auto end = user_message.find('\n', start);
    if (end == std::string::npos) end = user_message.size();
    const std::string method =
        user_message.substr(start + marker.size(), end - start - marker.size());

    const RubricNode& node = resolve_path(problem.rubric, method);
    Rational truth_total(0);
    for (const auto& [path, marks] : record.truth.per_criterion_marks) {
        if (path == method || path.rfind(method + "/", 0) == 0) truth_total += marks;
    }
    const Rational score = truth_total * Rational(4) / node.max_marks;

    nlohmann::json doc;
    doc["score"] = number_json(score);
    doc["feedback"] = "Holistic score derived from the reference assessment.";
    return doc.dump(2);
}

BackendResponse GroundTruthBackend::complete(const BackendRequest& request) {
    const std::string& user = request.user_message;
    const SubmissionRecord& record = locate_submission(user);
    const Problem& problem = problem_of(record);

    std::string reply;
    if (user.find("Point to be evaluated: ") != std::string::npos) {
        reply = answer_pre(problem, record, user);
    } else if (user.find("\"identified_approach\"") != std::string::npos) {
        reply = answer_eme_identify(problem, record);
    } else if (user.find("\"criteria_scores\"") != std::string::npos) {
        reply = answer_eme_evaluate(problem, record);
    } else if (user.find("\"program_format\"") != std::string::npos) {
        reply = answer_fpm(problem, record);
    } else if (user.find("Method to grade: ") != std::string::npos) {
        reply = answer_qa_method(problem, record, user);
    } else if (user.find("Code Submission: ") != std::string::npos) {
        reply = answer_cre(problem, record);
    } else {
        throw UnknownPromptError("prompt does not match any grading technique");
    }

    BackendResponse response;
    response.raw_text = std::move(reply);
    response.usage = mock_usage(request, response.raw_text);
    response.latency_ms = 0;
    return response;
}

}  // namespace gradekit
