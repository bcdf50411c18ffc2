#include "gradekit/graders.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gradekit/fingerprint.hpp"
#include "gradekit/parallel.hpp"
#include "gradekit/rubric.hpp"

namespace gradekit {

namespace {

std::string question_text(const Problem& problem) {
    if (!problem.scaffold) return problem.statement;
    return problem.statement + "\n\n" + *problem.scaffold;
}

std::string compiler_slot(const CompileOutcome& outcome) {
    if (outcome.transcript.empty())
        return outcome.ok ? "(compiled cleanly; no diagnostics)" : "(no compiler output)";
    return outcome.transcript;
}

nlohmann::json model_to_json(const ModelSpec& model) {
    return {{"model_id", model.model_id},
            {"temperature", model.temperature},
            {"max_output", model.max_output}};
}

BackendRequest make_request(const ModelSpec& model, const RenderedPrompt& prompt) {
    BackendRequest request;
    request.system_message = prompt.system;
    request.user_message = prompt.user;
    request.model_id = model.model_id;
    request.temperature = model.temperature;
    request.max_output = model.max_output;
    return request;
}

void attach_attempts(EvaluationTrace& trace, const GatewayResult& result) {
    trace.raw_responses.insert(trace.raw_responses.end(), result.attempts_raw.begin(),
                               result.attempts_raw.end());
    trace.response_cached.insert(trace.response_cached.end(), result.attempts_cached.begin(),
                                 result.attempts_cached.end());
}

void attach_syntax(EvaluationTrace& trace, const CompileOutcome& outcome,
                   const GradingConfig& config) {
    if (outcome.toolchain_id == "none") return;
    trace.syntax_score = syntax_score(outcome, config.penalty);
    trace.syntax_max = config.penalty.max_syntax_marks;
}

// ---------------------------------------------------------------------------
// CRE response mapping

void map_cre_node(const RubricNode& node, const nlohmann::json& value, const std::string& path,
                  std::map<std::string, CriterionResult>& out) {
    const std::string shown = path.empty() ? "<root>" : path;
    if (value.is_number()) {
        const Rational marks = rational_from_json(value);
        if (marks > node.max_marks)
            throw SchemaViolationError(shown, "marks " + marks.to_string() + " exceed max " +
                                                  node.max_marks.to_string());
        out[path] = {marks, ""};
        return;
    }
    if (!value.is_object())
        throw SchemaViolationError(shown, "expected object or number");
    if (value.contains("Marks")) {
        const Rational marks = rational_from_json(value.at("Marks"));
        if (marks > node.max_marks)
            throw SchemaViolationError(shown, "marks " + marks.to_string() + " exceed max " +
                                                  node.max_marks.to_string());
        std::string feedback;
        if (value.contains("Feedback") && value.at("Feedback").is_string())
            feedback = value.at("Feedback").get<std::string>();
        out[path] = {marks, std::move(feedback)};
        return;
    }
    for (const auto& [key, child_value] : value.items()) {
        if (key == "Feedback") continue;
        const RubricNode* child = nullptr;
        for (const auto& c : node.children)
            if (c.label == key) { child = &c; break; }
        if (!child)
            throw UnmappableCriterionError("response key '" + key + "' not in rubric under '" +
                                           shown + "'");
        map_cre_node(*child, child_value, path.empty() ? key : path + "/" + key, out);
    }
}

std::map<std::string, CriterionResult> map_cre_response(const RubricNode& rubric,
                                                        const nlohmann::json& response) {
    // Models often wrap the evaluation in a single student-id key; unwrap it
    // when that key matches no top-level rubric label but the inner object's
    // keys all do.
    const nlohmann::json* body = &response;
    if (response.is_object() && response.size() == 1 && !response.contains("Marks")) {
        const auto& [key, value] = *response.items().begin();
        const auto is_child = [&](const std::string& label) {
            return std::any_of(rubric.children.begin(), rubric.children.end(),
                               [&](const RubricNode& c) { return c.label == label; });
        };
        if (!is_child(key) && value.is_object() && !value.empty() && !value.contains("Marks")) {
            bool inner_all_match = true;
            for (const auto& [inner_key, inner_value] : value.items()) {
                (void)inner_value;
                if (inner_key != "Feedback" && !is_child(inner_key)) {
                    inner_all_match = false;
                    break;
                }
            }
            if (inner_all_match) body = &value;
        }
    }
    std::map<std::string, CriterionResult> out;
    map_cre_node(rubric, *body, "", out);
    return out;
}

// ---------------------------------------------------------------------------
// EME helpers

const RubricNode* find_approach(const RubricNode& root, const std::string& name) {
    for (const auto& child : root.children) {
        if (child.label == name) return &child;
        if (child.approach_group && *child.approach_group == name) return &child;
    }
    return nullptr;
}

struct SelectedRubric {
    const RubricNode* node;   // subtree actually graded
    std::string base_path;    // "" when the whole rubric is graded
};

std::vector<std::pair<std::string, const RubricNode*>> selected_leaves(
    const SelectedRubric& selected) {
    std::vector<std::pair<std::string, const RubricNode*>> leaves;
    for (auto& [rel, leaf] : rubric_leaves(*selected.node)) {
        std::string full = selected.base_path;
        if (!rel.empty()) full = full.empty() ? rel : full + "/" + rel;
        leaves.emplace_back(std::move(full), leaf);
    }
    return leaves;
}

/// criterion string -> leaf path. Accepts the full label-path or, when
/// unique, the bare leaf label.
std::optional<std::string> match_criterion(
    const std::string& criterion,
    const std::vector<std::pair<std::string, const RubricNode*>>& leaves) {
    for (const auto& [path, leaf] : leaves) {
        (void)leaf;
        if (path == criterion) return path;
    }
    std::optional<std::string> unique;
    for (const auto& [path, leaf] : leaves) {
        if (leaf->label == criterion) {
            if (unique) return std::nullopt;  // ambiguous
            unique = path;
        }
    }
    return unique;
}

std::optional<std::string> validate_member_evaluation(
    const nlohmann::json& value,
    const std::vector<std::pair<std::string, const RubricNode*>>& leaves) {
    if (auto issue = validate_schema(PromptKind::EmeEvaluate, value))
        return issue->field_path + ": " + issue->message;

    std::map<std::string, Rational> seen;
    for (const auto& item : value.at("criteria_scores")) {
        const std::string criterion = item.at("criterion").get<std::string>();
        const auto path = match_criterion(criterion, leaves);
        if (!path) return "criterion '" + criterion + "' does not match any rubric point";
        if (seen.count(*path)) return "criterion '" + criterion + "' appears twice";
        const Rational score = rational_from_json(item.at("score"));
        const Rational max_score = rational_from_json(item.at("max_score"));
        const RubricNode& leaf = *std::find_if(leaves.begin(), leaves.end(), [&](const auto& p) {
                                      return p.first == *path;
                                  })->second;
        if (std::fabs((max_score - leaf.max_marks).to_double()) > kMarksTolerance)
            return "max_score for '" + criterion + "' must be " + leaf.max_marks.to_string();
        if (score > leaf.max_marks)
            return "score for '" + criterion + "' exceeds rubric maximum";
        seen.emplace(*path, score);
    }
    if (seen.size() != leaves.size())
        return "evaluation must cover every rubric point of the approach (" +
               std::to_string(seen.size()) + " of " + std::to_string(leaves.size()) + " covered)";
    return std::nullopt;
}

}  // namespace

void EnsembleConfig::validate() const {
    if (members.empty()) throw UsageError("ensemble needs at least one member");
    if (confidence_floor < 0.0 || confidence_floor > 1.0)
        throw UsageError("confidence_floor must lie in [0, 1]");
}

std::string GradingConfig::fingerprint() const {
    nlohmann::json doc;
    doc["technique"] = to_string(technique);
    doc["model"] = model_to_json(model);
    nlohmann::json members = nlohmann::json::array();
    for (const auto& m : ensemble.members) members.push_back(model_to_json(m));
    doc["ensemble"] = {{"members", members},
                       {"approach_identifier_model",
                        ensemble.approach_identifier_model ? nlohmann::json(*ensemble.approach_identifier_model)
                                                           : nlohmann::json(nullptr)},
                       {"confidence_floor", ensemble.confidence_floor}};
    doc["pre_failure_threshold"] = pre_failure_threshold;
    doc["qa_scale"] = qa_scale.to_string();
    doc["penalty"] = {{"max_syntax_marks", penalty.max_syntax_marks.to_string()},
                      {"penalty_per_error", penalty.penalty_per_error.to_string()}};
    doc["toolchain"] = toolchain ? nlohmann::json(toolchain->id) : nlohmann::json(nullptr);
    doc["prompt_template_version"] = kPromptTemplateVersion;
    return fingerprint_hex(doc.dump());
}

Rational ensemble_vote(const std::vector<Rational>& member_scores) {
    if (member_scores.empty()) throw UsageError("vote over zero members");
    std::map<Rational, std::size_t> counts;
    for (const auto& score : member_scores) ++counts[score];
    for (const auto& [value, count] : counts)
        if (count * 2 > member_scores.size()) return value;

    Rational sum(0);
    for (const auto& score : member_scores) sum += score;
    const Rational mean = sum / Rational(static_cast<std::int64_t>(member_scores.size()));
    return Rational(mean.round_half_away_from_zero());
}

EvaluationTrace grade_cre(const Problem& problem, const SubmissionRecord& record,
                          const CompileOutcome& compile_outcome, Gateway& gateway,
                          const GradingConfig& config) {
    const RenderedPrompt prompt =
        render_prompt(PromptKind::Cre, {{"Question", question_text(problem)},
                                        {"Rubric", rubric_to_text(problem.rubric)},
                                        {"Code Submission", record.code},
                                        {"Compiler Response", compiler_slot(compile_outcome)}});

    auto last_unmappable = std::make_shared<bool>(false);
    const auto validator = [&, last_unmappable](const nlohmann::json& value)
        -> std::optional<std::string> {
        *last_unmappable = false;
        if (auto issue = validate_schema(PromptKind::Cre, value))
            return issue->field_path + ": " + issue->message;
        try {
            map_cre_response(problem.rubric, value);
        } catch (const UnmappableCriterionError& e) {
            *last_unmappable = true;
            return std::string(e.what());
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::nullopt;
    };

    GatewayResult result;
    try {
        result = gateway.call_with_repair(make_request(config.model, prompt), validator);
    } catch (const ExhaustedRetriesError& e) {
        if (*last_unmappable)
            throw UnmappableCriterionError(std::string("CRE response never mapped onto the rubric: ") +
                                           e.what());
        throw;
    }

    EvaluationTrace trace;
    trace.student_id = record.meta.student_id;
    trace.problem_id = problem.id;
    trace.technique = Technique::Cre;
    trace.per_criterion = map_cre_response(problem.rubric, result.parsed);
    attach_syntax(trace, compile_outcome, config);
    attach_attempts(trace, result);
    trace.config_fingerprint = config.fingerprint();
    return trace;
}

EvaluationTrace grade_pre(const Problem& problem, const SubmissionRecord& record,
                          const CompileOutcome& compile_outcome, Gateway& gateway,
                          const GradingConfig& config) {
    const auto leaves = rubric_leaves(problem.rubric);
    if (leaves.empty()) throw UsageError("rubric has no leaves");

    struct LeafOutcome {
        bool ok = false;
        Rational marks;
        std::string feedback;
        std::vector<std::string> raws;
        std::vector<bool> cached;
        std::string error;
    };
    std::vector<LeafOutcome> outcomes(leaves.size());

    const std::string question = question_text(problem);
    const std::string compiler = compiler_slot(compile_outcome);

    parallel_for(leaves.size(), config.concurrency, [&](std::size_t i) {
        const auto& [path, leaf] = leaves[i];
        const RenderedPrompt prompt =
            render_prompt(PromptKind::Pre, {{"Question", question},
                                            {"Student Solution", record.code},
                                            {"Point to be evaluated", path},
                                            {"Compiler Response", compiler}});
        const auto validator = [](const nlohmann::json& value) -> std::optional<std::string> {
            if (auto issue = validate_schema(PromptKind::Pre, value))
                return issue->field_path + ": " + issue->message;
            return std::nullopt;
        };
        try {
            const GatewayResult result =
                gateway.call_with_repair(make_request(config.model, prompt), validator);
            const PreDecision decision = parse_pre(result.parsed);
            outcomes[i].ok = true;
            outcomes[i].marks = decision.yes ? leaf->max_marks : Rational(0);
            outcomes[i].feedback = decision.feedback;
            outcomes[i].raws = result.attempts_raw;
            outcomes[i].cached = result.attempts_cached;
        } catch (const ExhaustedRetriesError& e) {
            outcomes[i].error = e.what();
            outcomes[i].raws = e.attempts();
            outcomes[i].cached.assign(e.attempts().size(), false);
        }
    });

    EvaluationTrace trace;
    trace.student_id = record.meta.student_id;
    trace.problem_id = problem.id;
    trace.technique = Technique::Pre;

    std::size_t failures = 0;
    std::vector<std::string> failure_raws;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const auto& [path, leaf] = leaves[i];
        (void)leaf;
        trace.raw_responses.insert(trace.raw_responses.end(), outcomes[i].raws.begin(),
                                   outcomes[i].raws.end());
        trace.response_cached.insert(trace.response_cached.end(), outcomes[i].cached.begin(),
                                     outcomes[i].cached.end());
        if (outcomes[i].ok) {
            trace.per_criterion[path] = {outcomes[i].marks, outcomes[i].feedback};
        } else {
            ++failures;
            trace.failed_criteria.push_back(path);
            failure_raws.insert(failure_raws.end(), outcomes[i].raws.begin(),
                                outcomes[i].raws.end());
        }
    }

    const double failure_fraction =
        static_cast<double>(failures) / static_cast<double>(leaves.size());
    if (failures > 0 && failure_fraction > config.pre_failure_threshold)
        throw ExhaustedRetriesError("PRE: " + std::to_string(failures) + " of " +
                                        std::to_string(leaves.size()) +
                                        " rubric points failed validation",
                                    std::move(failure_raws));

    attach_syntax(trace, compile_outcome, config);
    trace.config_fingerprint = config.fingerprint();
    return trace;
}

EvaluationTrace grade_eme(const Problem& problem, const SubmissionRecord& record,
                          Gateway& gateway, const GradingConfig& config) {
    config.ensemble.validate();
    const auto& members = config.ensemble.members;

    EvaluationTrace trace;
    trace.student_id = record.meta.student_id;
    trace.problem_id = problem.id;
    trace.technique = Technique::Eme;

    SelectedRubric selected{&problem.rubric, ""};

    // (a) identify which approach subtree to grade, for multi-solution rubrics.
    if (problem.rubric.has_approach_alternatives()) {
        ModelSpec identifier = members.front();
        identifier.temperature = 0.0;
        if (config.ensemble.approach_identifier_model)
            identifier.model_id = *config.ensemble.approach_identifier_model;

        const RenderedPrompt prompt = render_prompt(
            PromptKind::EmeIdentify,
            {{"rubric_content", rubric_to_text(problem.rubric)}, {"code", record.code}});

        const auto validator = [&](const nlohmann::json& value) -> std::optional<std::string> {
            if (auto issue = validate_schema(PromptKind::EmeIdentify, value))
                return issue->field_path + ": " + issue->message;
            const std::string name = value.at("identified_approach").get<std::string>();
            if (!find_approach(problem.rubric, name))
                return "identified_approach '" + name + "' is not an approach in the rubric";
            return std::nullopt;
        };

        GatewayResult result;
        try {
            result = gateway.call_with_repair(make_request(identifier, prompt), validator);
        } catch (const ExhaustedRetriesError& e) {
            throw ApproachNotInRubricError(
                std::string("approach identification failed: ") + e.what());
        }
        const EmeIdentification identification = parse_eme_identification(result.parsed);
        const RubricNode* approach = find_approach(problem.rubric, identification.identified_approach);
        selected = {approach, approach->label};
        trace.approach = ApproachIdentification{identification.identified_approach,
                                                identification.confidence,
                                                identification.reasoning};
        trace.flagged_low_confidence =
            identification.confidence < config.ensemble.confidence_floor;
        attach_attempts(trace, result);
    }

    const auto leaves = selected_leaves(selected);
    if (leaves.empty()) throw UsageError("selected rubric subtree has no leaves");

    // (b) every member evaluates the selected subtree.
    const RenderedPrompt evaluate_prompt = render_prompt(
        PromptKind::EmeEvaluate,
        {{"question", question_text(problem)},
         {"rubric", rubric_to_text(*selected.node)},
         {"solution", problem.model_solution},
         {"code", record.code},
         {"identified_approach", selected.node->label}});

    struct MemberOutcome {
        bool ok = false;
        std::map<std::string, CriterionScore> by_path;
        Rational reported_total;
        std::string overall_feedback;
        std::vector<std::string> raws;
        std::vector<bool> cached;
        std::string error;
    };
    std::vector<MemberOutcome> outcomes(members.size());

    parallel_for(members.size(), config.concurrency, [&](std::size_t m) {
        const auto validator = [&](const nlohmann::json& value) {
            return validate_member_evaluation(value, leaves);
        };
        try {
            const GatewayResult result =
                gateway.call_with_repair(make_request(members[m], evaluate_prompt), validator);
            const EmeEvaluation evaluation = parse_eme_evaluation(result.parsed);
            MemberOutcome& outcome = outcomes[m];
            for (const auto& cs : evaluation.criteria) {
                const auto path = match_criterion(cs.criterion, leaves);
                outcome.by_path[*path] = cs;
            }
            outcome.reported_total = evaluation.total_score;
            outcome.overall_feedback = evaluation.overall_feedback;
            outcome.raws = result.attempts_raw;
            outcome.cached = result.attempts_cached;
            outcome.ok = true;
        } catch (const ExhaustedRetriesError& e) {
            outcomes[m].error = e.what();
            outcomes[m].raws = e.attempts();
            outcomes[m].cached.assign(e.attempts().size(), false);
        }
    });

    std::size_t successes = 0;
    for (const auto& outcome : outcomes)
        if (outcome.ok) ++successes;
    if (successes * 2 <= members.size())
        throw MemberFailureError("only " + std::to_string(successes) + " of " +
                                 std::to_string(members.size()) +
                                 " ensemble members produced a valid evaluation");

    // (c) per-criterion vote; (d) total over ensembled criteria.
    std::map<std::string, Rational> ensembled;
    Rational ensemble_total(0);
    for (const auto& [path, leaf] : leaves) {
        std::vector<Rational> scores;
        for (const auto& outcome : outcomes)
            if (outcome.ok) scores.push_back(outcome.by_path.at(path).score);
        Rational vote = ensemble_vote(scores);
        if (vote > leaf->max_marks) vote = leaf->max_marks;  // fractional-max rounding edge
        ensembled[path] = vote;
        ensemble_total += vote;
    }

    // (e) representative feedback: member whose reported total is closest to
    // the ensemble total, earliest on ties.
    std::size_t best_member = members.size();
    Rational best_distance(0);
    for (std::size_t m = 0; m < members.size(); ++m) {
        if (!outcomes[m].ok) continue;
        const Rational distance = (outcomes[m].reported_total - ensemble_total).abs();
        if (best_member == members.size() || distance < best_distance) {
            best_member = m;
            best_distance = distance;
        }
    }

    for (const auto& [path, leaf] : leaves) {
        (void)leaf;
        CriterionResult result;
        result.marks = ensembled.at(path);
        result.feedback = outcomes[best_member].by_path.at(path).feedback;
        trace.per_criterion[path] = std::move(result);
    }

    for (const auto& outcome : outcomes) {
        trace.raw_responses.insert(trace.raw_responses.end(), outcome.raws.begin(),
                                   outcome.raws.end());
        trace.response_cached.insert(trace.response_cached.end(), outcome.cached.begin(),
                                     outcome.cached.end());
    }
    trace.config_fingerprint = config.fingerprint();
    return trace;
}

EvaluationTrace grade_fpm(const Problem& problem, const SubmissionRecord& record,
                          Gateway& gateway, const GradingConfig& config) {
    const RenderedPrompt prompt = render_prompt(
        PromptKind::Fpm, {{"Question", question_text(problem)}, {"Student Solution", record.code}});

    const auto validator = [](const nlohmann::json& value) -> std::optional<std::string> {
        if (auto issue = validate_schema(PromptKind::Fpm, value))
            return issue->field_path + ": " + issue->message;
        return std::nullopt;
    };
    const GatewayResult result =
        gateway.call_with_repair(make_request(config.model, prompt), validator);
    const FpmScores scores = parse_fpm(result.parsed);

    EvaluationTrace trace;
    trace.student_id = record.meta.student_id;
    trace.problem_id = problem.id;
    trace.technique = Technique::Fpm;
    trace.per_criterion["Program Format"] = {scores.program_format, ""};
    trace.per_criterion["Time Complexity"] = {scores.time_complexity, ""};
    trace.per_criterion["Space Complexity"] = {scores.space_complexity, ""};
    trace.per_criterion["Correctness General"] = {scores.correctness_general, scores.feedback};
    trace.per_criterion["Correctness Edge Cases"] = {scores.correctness_edge_cases, ""};
    attach_attempts(trace, result);
    trace.config_fingerprint = config.fingerprint();
    return trace;
}

EvaluationTrace grade_qa_methodwise(const Problem& problem, const SubmissionRecord& record,
                                    Gateway& gateway, const GradingConfig& config) {
    std::vector<const RubricNode*> methods;
    if (problem.rubric.children.empty()) {
        methods.push_back(&problem.rubric);
    } else {
        for (const auto& child : problem.rubric.children) methods.push_back(&child);
    }

    const bool ensembled = config.ensemble.members.size() > 1;
    const std::vector<ModelSpec> members =
        ensembled ? config.ensemble.members : std::vector<ModelSpec>{config.model};

    const std::string question = question_text(problem);
    struct MethodOutcome {
        Rational score;
        std::string feedback;
        std::vector<std::string> raws;
        std::vector<bool> cached;
    };
    std::vector<MethodOutcome> outcomes(methods.size());

    parallel_for(methods.size(), config.concurrency, [&](std::size_t i) {
        const RubricNode& method = *methods[i];
        const RenderedPrompt prompt =
            render_prompt(PromptKind::QaMethod, {{"Question", question},
                                                 {"Method", method.label},
                                                 {"Method Rubric", rubric_to_text(method)},
                                                 {"Student Solution", record.code},
                                                 {"Scale Max", config.qa_scale.to_string()}});
        const auto validator = [&](const nlohmann::json& value) -> std::optional<std::string> {
            if (auto issue = validate_schema(PromptKind::QaMethod, value))
                return issue->field_path + ": " + issue->message;
            const Rational score = rational_from_json(value.at("score"));
            if (score > config.qa_scale)
                return "score exceeds the " + config.qa_scale.to_string() + "-point scale";
            return std::nullopt;
        };

        std::vector<Rational> member_scores;
        std::vector<std::string> member_feedback;
        MethodOutcome& outcome = outcomes[i];
        for (const auto& member : members) {
            const GatewayResult result =
                gateway.call_with_repair(make_request(member, prompt), validator);
            const QaMethodScore parsed = parse_qa_method(result.parsed, config.qa_scale);
            member_scores.push_back(parsed.score);
            member_feedback.push_back(parsed.feedback);
            outcome.raws.insert(outcome.raws.end(), result.attempts_raw.begin(),
                                result.attempts_raw.end());
            outcome.cached.insert(outcome.cached.end(), result.attempts_cached.begin(),
                                  result.attempts_cached.end());
        }
        outcome.score = ensemble_vote(member_scores);
        outcome.feedback = member_feedback.front();
        for (std::size_t m = 0; m < member_scores.size(); ++m) {
            if (member_scores[m] == outcome.score) { outcome.feedback = member_feedback[m]; break; }
        }
    });

    EvaluationTrace trace;
    trace.student_id = record.meta.student_id;
    trace.problem_id = problem.id;
    trace.technique = Technique::QaMethodwise;
    std::map<std::string, Rational> method_scores;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        method_scores[methods[i]->label] = outcomes[i].score;
        trace.per_criterion[methods[i]->label] = {outcomes[i].score, outcomes[i].feedback};
        trace.raw_responses.insert(trace.raw_responses.end(), outcomes[i].raws.begin(),
                                   outcomes[i].raws.end());
        trace.response_cached.insert(trace.response_cached.end(), outcomes[i].cached.begin(),
                                     outcomes[i].cached.end());
    }
    trace.method_scores = std::move(method_scores);
    trace.config_fingerprint = config.fingerprint();
    return trace;
}

EvaluationTrace grade_submission(const Problem& problem, const SubmissionRecord& record,
                                 Gateway& gateway, const GradingConfig& config) {
    const bool wants_compiler =
        config.technique == Technique::Cre || config.technique == Technique::Pre;
    CompileOutcome outcome = no_compile_outcome();
    if (wants_compiler && config.toolchain) {
        const std::string filename =
            std::filesystem::path(record.meta.source_path).filename().string();
        outcome = compile_source(record.code, filename.empty() ? "code.txt" : filename,
                                 *config.toolchain);
    }

    switch (config.technique) {
        case Technique::Cre: return grade_cre(problem, record, outcome, gateway, config);
        case Technique::Pre: return grade_pre(problem, record, outcome, gateway, config);
        case Technique::Eme: return grade_eme(problem, record, gateway, config);
        case Technique::Fpm: return grade_fpm(problem, record, gateway, config);
        case Technique::QaMethodwise:
            return grade_qa_methodwise(problem, record, gateway, config);
    }
    throw UsageError("unknown technique");
}

std::vector<EvaluationTrace> grade_corpus(const Corpus& corpus, Gateway& gateway,
                                          const GradingConfig& config) {
    std::vector<std::pair<const Problem*, const SubmissionRecord*>> work;
    for (const auto& problem : corpus.problems)
        for (const auto& record : problem.submissions) work.emplace_back(&problem, &record);

    std::vector<EvaluationTrace> traces(work.size());
    parallel_for(work.size(), config.concurrency, [&](std::size_t i) {
        traces[i] = grade_submission(*work[i].first, *work[i].second, gateway, config);
    });
    return traces;
}

}  // namespace gradekit
