// gradekit CLI: grade a corpus with one of the rubric techniques, compare a
// run against ground truth, and aggregate trace analytics.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gradekit/agreement.hpp"
#include "gradekit/analytics.hpp"
#include "gradekit/corpus.hpp"
#include "gradekit/errors.hpp"
#include "gradekit/graders.hpp"
#include "gradekit/http_backend.hpp"
#include "gradekit/mock_backend.hpp"
#include "gradekit/parallel.hpp"
#include "gradekit/report.hpp"
#include "gradekit/trace_store.hpp"

namespace {

using namespace gradekit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataViolation = 2;
constexpr int kExitBackendExhaustion = 3;

struct CliConfig {
    std::string backend_kind = "mock-ground-truth";
    HttpBackendConfig http;
    std::string script_path;
    GatewayConfig gateway;
    GradingConfig grading;
    std::string toolchain_choice = "none";  // none | auto | gcc | g++ | clang++ | javac
};

ModelSpec model_from_json(const nlohmann::json& doc) {
    ModelSpec model;
    model.model_id = doc.value("model_id", model.model_id);
    model.temperature = doc.value("temperature", model.temperature);
    model.max_output = doc.value("max_output", model.max_output);
    return model;
}

void load_config_file(CliConfig& cli, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw UsageError("config file " + path + " is not valid JSON");

    if (doc.contains("backend")) {
        const auto& backend = doc.at("backend");
        cli.backend_kind = backend.value("kind", cli.backend_kind);
        cli.http.base_url = backend.value("base_url", cli.http.base_url);
        cli.http.completions_path = backend.value("completions_path", cli.http.completions_path);
        cli.http.api_key_env = backend.value("api_key_env", cli.http.api_key_env);
        cli.script_path = backend.value("script_path", cli.script_path);
    }
    if (doc.contains("gateway")) {
        const auto& gw = doc.at("gateway");
        cli.gateway.max_retries = gw.value("max_retries", cli.gateway.max_retries);
        cli.gateway.concurrency_limit =
            gw.value("concurrency_limit", cli.gateway.concurrency_limit);
        cli.gateway.request_timeout =
            std::chrono::milliseconds(gw.value("request_timeout_ms", 60000));
        cli.gateway.rate_per_minute = gw.value("rate_per_minute", cli.gateway.rate_per_minute);
        if (gw.contains("cache_dir") && gw.at("cache_dir").is_string())
            cli.gateway.cache_dir = gw.at("cache_dir").get<std::string>();
    }
    if (doc.contains("model")) cli.grading.model = model_from_json(doc.at("model"));
    if (doc.contains("ensemble")) {
        const auto& ens = doc.at("ensemble");
        if (ens.contains("members")) {
            cli.grading.ensemble.members.clear();
            for (const auto& member : ens.at("members"))
                cli.grading.ensemble.members.push_back(model_from_json(member));
        }
        if (ens.contains("approach_identifier_model"))
            cli.grading.ensemble.approach_identifier_model =
                ens.at("approach_identifier_model").get<std::string>();
        cli.grading.ensemble.confidence_floor =
            ens.value("confidence_floor", cli.grading.ensemble.confidence_floor);
    }
    cli.grading.pre_failure_threshold =
        doc.value("pre_failure_threshold", cli.grading.pre_failure_threshold);
    if (doc.contains("qa_scale"))
        cli.grading.qa_scale = QuestionAgnosticScale(doc.at("qa_scale").get<int>()).as_rational();
    if (doc.contains("syntax")) {
        const auto& syntax = doc.at("syntax");
        if (syntax.contains("toolchain")) {
            if (syntax.at("toolchain").is_string()) {
                cli.toolchain_choice = syntax.at("toolchain").get<std::string>();
            } else {
                ToolchainConfig toolchain;
                const auto& tc = syntax.at("toolchain");
                toolchain.id = tc.value("id", "custom");
                toolchain.command = tc.value("command", std::vector<std::string>{});
                toolchain.error_pattern = tc.value("error_pattern", toolchain.error_pattern);
                if (tc.contains("summary_pattern"))
                    toolchain.summary_pattern = tc.at("summary_pattern").get<std::string>();
                toolchain.timeout = std::chrono::milliseconds(tc.value("timeout_ms", 20000));
                cli.grading.toolchain = std::move(toolchain);
                cli.toolchain_choice = "custom";
            }
        }
        if (syntax.contains("max_syntax_marks"))
            cli.grading.penalty.max_syntax_marks =
                rational_from_json(syntax.at("max_syntax_marks"));
        if (syntax.contains("penalty_per_error"))
            cli.grading.penalty.penalty_per_error =
                rational_from_json(syntax.at("penalty_per_error"));
    }
}

void resolve_toolchain(CliConfig& cli, const Corpus& corpus) {
    if (cli.toolchain_choice == "none" || cli.toolchain_choice == "custom") return;
    if (cli.toolchain_choice == "auto") {
        const std::string language =
            corpus.problems.empty() ? "" : corpus.problems.front().language_tag;
        cli.grading.toolchain = toolchain_for_language(language);
        return;
    }
    if (cli.toolchain_choice == "gcc") cli.grading.toolchain = gcc_toolchain();
    else if (cli.toolchain_choice == "g++") cli.grading.toolchain = gxx_toolchain();
    else if (cli.toolchain_choice == "clang++") cli.grading.toolchain = clangxx_toolchain();
    else if (cli.toolchain_choice == "javac") cli.grading.toolchain = javac_toolchain();
    else throw UsageError("unknown toolchain '" + cli.toolchain_choice + "'");
}

std::shared_ptr<Backend> make_backend(const CliConfig& cli, std::shared_ptr<const Corpus> corpus) {
    if (cli.backend_kind == "mock-ground-truth" || cli.backend_kind == "mock")
        return std::make_shared<GroundTruthBackend>(std::move(corpus));
    if (cli.backend_kind == "mock-script") {
        auto mock = std::make_shared<MockBackend>();
        if (cli.script_path.empty())
            throw UsageError("mock-script backend needs backend.script_path in the config");
        std::ifstream in(cli.script_path);
        if (!in) throw UsageError("cannot read script file " + cli.script_path);
        nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object())
            throw UsageError("script file must be a JSON object of fingerprint -> reply");
        for (const auto& [fingerprint, reply] : doc.items())
            mock->script(fingerprint, reply.get<std::string>());
        return mock;
    }
    if (cli.backend_kind == "http") {
        if (cli.http.base_url.empty())
            throw UsageError("http backend needs backend.base_url in the config");
        HttpBackendConfig http = cli.http;
        http.timeout = cli.gateway.request_timeout;
        return std::make_shared<HttpBackend>(http);
    }
    throw UsageError("unknown backend kind '" + cli.backend_kind +
                     "' (mock-ground-truth, mock-script, http)");
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
    if (dynamic_cast<const ExhaustedRetriesError*>(&e) ||
        dynamic_cast<const MemberFailureError*>(&e) ||
        dynamic_cast<const RateLimitedError*>(&e) || dynamic_cast<const TransportError*>(&e))
        return kExitBackendExhaustion;
    return kExitDataViolation;
}

Corpus ingest_or_fail(const std::string& corpus_dir, bool strict, std::ostream& err) {
    IngestResult result = ingest(corpus_dir);
    if (!result.violations.empty()) {
        for (const auto& v : result.violations)
            err << "corpus violation: " << v.location << ": " << v.message << "\n";
        if (strict)
            throw Error(std::to_string(result.violations.size()) + " corpus violation(s)");
    }
    return std::move(result.corpus);
}

int cmd_grade(const std::string& corpus_dir, const std::string& store_dir,
              const std::string& technique_name, const std::string& run_id, CliConfig cli) {
    auto corpus = std::make_shared<Corpus>(ingest_or_fail(corpus_dir, /*strict=*/true, std::cerr));
    cli.grading.technique = technique_from_string(technique_name);
    resolve_toolchain(cli, *corpus);
    if (cli.grading.technique == Technique::Eme && cli.grading.ensemble.even_sized())
        std::cerr << "warning: even ensemble size " << cli.grading.ensemble.members.size()
                  << "; majority votes tie more often (odd sizes recommended)\n";

    Gateway gateway(make_backend(cli, corpus), cli.gateway);
    TraceStore store(store_dir);

    std::vector<std::pair<const Problem*, const SubmissionRecord*>> work;
    for (const auto& problem : corpus->problems)
        for (const auto& record : problem.submissions) work.emplace_back(&problem, &record);

    RunManifest manifest;
    manifest.run_id = run_id;
    manifest.technique = cli.grading.technique;
    manifest.config_fingerprint = cli.grading.fingerprint();
    manifest.dataset_id = corpus->dataset_id;
    manifest.qa_scale = cli.grading.qa_scale;
    for (const auto& [problem, record] : work)
        manifest.student_ids.push_back(record->meta.student_id);
    store.create_run(manifest);

    struct Outcome {
        bool ok = false;
        EvaluationTrace trace;
        std::string error;
        int exit_code = kExitBackendExhaustion;
    };
    std::vector<Outcome> outcomes(work.size());
    parallel_for(work.size(), cli.grading.concurrency, [&](std::size_t i) {
        try {
            outcomes[i].trace =
                grade_submission(*work[i].first, *work[i].second, gateway, cli.grading);
            outcomes[i].ok = true;
        } catch (const Error& e) {
            outcomes[i].error = e.what();
            outcomes[i].exit_code = exit_code_for(e);
        }
    });

    int failures = 0;
    int exit_code = kExitOk;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const std::string& student = work[i].second->meta.student_id;
        if (outcomes[i].ok) {
            store.write_trace(run_id, outcomes[i].trace);
            std::cout << "graded " << student << "\n";
        } else {
            ++failures;
            exit_code = std::max(exit_code, outcomes[i].exit_code);
            std::cerr << "FAILED " << student << ": " << outcomes[i].error << "\n";
        }
    }
    std::cout << (work.size() - static_cast<std::size_t>(failures)) << " of " << work.size()
              << " submissions graded into " << store_dir << "/" << run_id << "\n";
    return exit_code;
}

int cmd_metrics(const std::string& corpus_dir, const std::string& store_dir,
                const std::string& run_id, int bins, const std::string& mode_name,
                const std::string& format_name, std::string label, std::string out_path,
                bool allow_partial) {
    const Corpus corpus = ingest_or_fail(corpus_dir, /*strict=*/false, std::cerr);
    const TraceStore store(store_dir);
    const ScoreMode mode = score_mode_from_string(mode_name);

    const ExportedScores scores = export_scores(corpus, store, run_id, mode, allow_partial);
    if (scores.dropped > 0)
        std::cerr << "note: dropped " << scores.dropped << " students without traces\n";

    const AgreementReport report = full_report(scores.base, scores.experiment, bins);
    if (label.empty()) label = to_string(store.read_manifest(run_id).technique);

    std::cout << render_table({{label, report}}, table_format_from_string(format_name));
    for (const auto& [stat, reason] : report.undefined_reasons)
        std::cerr << "undefined " << stat << ": " << reason << "\n";

    std::string mode_tag = to_string(mode);
    for (auto& c : mode_tag)
        if (c == '+') c = '-';
    const auto dir = store.root() / run_id / "reports";
    std::filesystem::create_directories(dir);
    if (out_path.empty())
        out_path = (dir / ("report_" + mode_tag + "_K" + std::to_string(bins) + ".json")).string();
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw UsageError("cannot write report to " + out_path);
    out << report_to_json(report, label).dump(2) << "\n";
    std::cout << "report written to " << out_path << "\n";

    const auto scores_path = dir / ("scores_" + mode_tag + ".json");
    std::ofstream scores_out(scores_path, std::ios::binary);
    scores_out << exported_scores_to_json(scores).dump(2) << "\n";
    std::cout << "scores written to " << scores_path.string() << "\n";
    return kExitOk;
}

int cmd_analytics_missed(const std::string& store_dir, const std::string& run_id, int top_k) {
    const TraceStore store(store_dir);
    const auto rows = missed_criteria(store.list_traces(run_id), top_k);
    std::cout << "miss_rate  missed/graded  criterion\n";
    char buffer[32];
    for (const auto& row : rows) {
        std::snprintf(buffer, sizeof buffer, "%.3f", row.miss_rate);
        std::cout << buffer << "      " << row.zero_count << "/" << row.graded_count
                  << "          " << row.path << "\n";
    }
    return kExitOk;
}

int cmd_analytics_confidence(const std::string& store_dir, const std::string& run_id,
                             double threshold) {
    const TraceStore store(store_dir);
    if (store.read_manifest(run_id).technique != Technique::Eme)
        throw NotAnEmeRunError("run '" + run_id + "' was not graded with EME");
    const auto entries = low_confidence_traces(store.list_traces(run_id), threshold);
    std::cout << "confidence  student  approach\n";
    char buffer[32];
    for (const auto& entry : entries) {
        std::snprintf(buffer, sizeof buffer, "%.3f", entry.confidence);
        std::cout << buffer << "       " << entry.student_id << "  " << entry.approach << "\n";
    }
    std::cout << entries.size() << " trace(s) below threshold\n";
    return kExitOk;
}

int cmd_validate(const std::string& corpus_dir) {
    IngestResult result = ingest(corpus_dir);
    for (const auto& v : result.violations)
        std::cout << v.location << ": " << v.message << "\n";
    std::cout << result.violations.size() << " violation(s), "
              << result.corpus.submission_count() << " submission(s), "
              << result.corpus.problems.size() << " problem(s)\n";
    return result.violations.empty() ? kExitOk : kExitDataViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rubric-based grading orchestration and rater-agreement toolkit"};
    app.require_subcommand(1);

    std::string corpus_dir, store_dir, run_id, technique, config_path;
    std::string mode_name = "logical", format_name = "plain", label, out_path;
    std::string backend_kind, toolchain_choice, model_id;
    int bins = kDefaultBins, top_k = -1, concurrency = 0;
    double threshold = 0.8;
    bool allow_partial = false;

    auto* validate = app.add_subcommand("validate", "Ingest a corpus and report violations");
    validate->add_option("--corpus", corpus_dir, "Corpus directory")->required();

    auto* grade = app.add_subcommand("grade", "Grade every submission of a corpus");
    grade->add_option("--corpus", corpus_dir, "Corpus directory")->required();
    grade->add_option("--store", store_dir, "Trace store directory")->required();
    grade->add_option("--technique", technique, "cre | pre | eme | fpm | qa")->required();
    grade->add_option("--run-id", run_id, "New run identifier")->required();
    grade->add_option("--config", config_path, "JSON config file (or env GRADEKIT_CONFIG)");
    grade->add_option("--backend", backend_kind, "mock-ground-truth | mock-script | http");
    grade->add_option("--model", model_id, "Model id override");
    grade->add_option("--toolchain", toolchain_choice,
                      "none | auto | gcc | g++ | clang++ | javac");
    grade->add_option("--concurrency", concurrency, "Parallel submissions");

    auto* metrics = app.add_subcommand("metrics", "Agreement statistics for a finished run");
    metrics->add_option("--corpus", corpus_dir, "Corpus directory")->required();
    metrics->add_option("--store", store_dir, "Trace store directory")->required();
    metrics->add_option("--run-id", run_id, "Run identifier")->required();
    metrics->add_option("--bins", bins, "Bin count for kappa (default 5)");
    metrics->add_option("--mode", mode_name, "logical | logical+syntax");
    metrics->add_option("--format", format_name, "plain | csv | markdown");
    metrics->add_option("--label", label, "Row label (default: technique)");
    metrics->add_option("--out", out_path, "Machine-readable report path");
    metrics->add_flag("--allow-partial", allow_partial, "Drop students without traces");

    auto* analytics = app.add_subcommand("analytics", "Aggregations over a run's traces");
    analytics->require_subcommand(1);
    auto* missed = analytics->add_subcommand("missed", "Most frequently missed rubric criteria");
    missed->add_option("--store", store_dir, "Trace store directory")->required();
    missed->add_option("--run-id", run_id, "Run identifier")->required();
    missed->add_option("--top", top_k, "Show only the top K criteria");
    auto* confidence =
        analytics->add_subcommand("confidence", "Approach identifications below a threshold");
    confidence->add_option("--store", store_dir, "Trace store directory")->required();
    confidence->add_option("--run-id", run_id, "Run identifier")->required();
    confidence->add_option("--threshold", threshold, "Confidence threshold (default 0.8)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(corpus_dir);

        if (grade->parsed()) {
            CliConfig cli;
            if (config_path.empty())
                if (const char* env = std::getenv("GRADEKIT_CONFIG"); env && *env)
                    config_path = env;
            if (!config_path.empty()) load_config_file(cli, config_path);
            if (!backend_kind.empty()) cli.backend_kind = backend_kind;
            if (!toolchain_choice.empty()) cli.toolchain_choice = toolchain_choice;
            if (!model_id.empty()) cli.grading.model.model_id = model_id;
            if (concurrency > 0) {
                cli.grading.concurrency = concurrency;
                cli.gateway.concurrency_limit =
                    std::max(cli.gateway.concurrency_limit, concurrency);
            }
            return cmd_grade(corpus_dir, store_dir, technique, run_id, std::move(cli));
        }

        if (metrics->parsed())
            return cmd_metrics(corpus_dir, store_dir, run_id, bins, mode_name, format_name, label,
                               out_path, allow_partial);

        if (missed->parsed()) return cmd_analytics_missed(store_dir, run_id, top_k);
        if (confidence->parsed()) return cmd_analytics_confidence(store_dir, run_id, threshold);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataViolation;
    }
    return kExitUsage;
}
