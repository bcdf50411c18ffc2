#include "gradekit/trace_store.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "gradekit/fingerprint.hpp"
#include "gradekit/rubric.hpp"

namespace gradekit {

namespace {

nlohmann::json manifest_to_json(const RunManifest& manifest) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["run_id"] = manifest.run_id;
    doc["technique"] = to_string(manifest.technique);
    doc["config_fingerprint"] = manifest.config_fingerprint;
    doc["dataset_id"] = manifest.dataset_id;
    doc["qa_scale"] = rational_to_json(manifest.qa_scale);
    doc["student_ids"] = manifest.student_ids;
    return doc;
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
    RunManifest manifest;
    manifest.run_id = doc.at("run_id").get<std::string>();
    manifest.technique = technique_from_string(doc.at("technique").get<std::string>());
    manifest.config_fingerprint = doc.value("config_fingerprint", "");
    manifest.dataset_id = doc.value("dataset_id", "");
    if (doc.contains("qa_scale")) manifest.qa_scale = rational_from_json(doc.at("qa_scale"));
    if (doc.contains("student_ids"))
        manifest.student_ids = doc.at("student_ids").get<std::vector<std::string>>();
    return manifest;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UnreadableFileError("cannot read " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw CorruptTraceError("invalid JSON in " + path.string());
    return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UnreadableFileError("cannot write " + path.string());
    out << text;
}

}  // namespace

ScoreMode score_mode_from_string(const std::string& text) {
    if (text == "logical") return ScoreMode::Logical;
    if (text == "logical+syntax" || text == "logical_plus_syntax")
        return ScoreMode::LogicalPlusSyntax;
    throw UsageError("unknown score mode '" + text + "' (use logical or logical+syntax)");
}

std::string to_string(ScoreMode mode) {
    return mode == ScoreMode::Logical ? "logical" : "logical+syntax";
}

TraceStore::TraceStore(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
    redaction_patterns_ = {
        R"(sk-[A-Za-z0-9_\-]{8,})",
        R"(Bearer\s+[A-Za-z0-9._\-]{8,})",
        R"(api[_-]?key["':=\s]+[A-Za-z0-9._\-]{8,})",
    };
}

void TraceStore::set_redaction_patterns(std::vector<std::string> patterns) {
    redaction_patterns_ = std::move(patterns);
}

std::filesystem::path TraceStore::run_dir(const std::string& run_id) const {
    if (run_id.empty() || run_id.find('/') != std::string::npos)
        throw UsageError("run id must be a non-empty path-safe name");
    return root_ / run_id;
}

std::string TraceStore::redact(const std::string& text) const {
    std::string out = text;
    for (const auto& pattern : redaction_patterns_)
        out = std::regex_replace(out, std::regex(pattern), "[REDACTED]");
    return out;
}

bool TraceStore::has_run(const std::string& run_id) const {
    return std::filesystem::exists(run_dir(run_id) / "manifest.json");
}

void TraceStore::create_run(const RunManifest& manifest) {
    std::lock_guard lock(write_mutex_);
    const auto dir = run_dir(manifest.run_id);
    if (std::filesystem::exists(dir))
        throw DuplicateRunIdError("run '" + manifest.run_id + "' already exists");
    std::filesystem::create_directories(dir / "traces");
    write_text_file(dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
}

void TraceStore::write_trace(const std::string& run_id, const EvaluationTrace& trace) {
    std::lock_guard lock(write_mutex_);
    const auto dir = run_dir(run_id);
    if (!std::filesystem::exists(dir / "manifest.json"))
        throw UnreadableFileError("run '" + run_id + "' has not been created");
    const auto path = dir / "traces" / (trace.student_id + ".json");
    if (std::filesystem::exists(path))
        throw DuplicateRunIdError("trace for student '" + trace.student_id +
                                  "' already written in run '" + run_id + "'");

    EvaluationTrace stored = trace;
    for (auto& raw : stored.raw_responses) raw = redact(raw);
    const nlohmann::json payload = trace_to_json(stored);
    nlohmann::json doc;
    doc["checksum"] = fingerprint_hex(payload.dump());
    doc["trace"] = payload;
    write_text_file(path, doc.dump(2) + "\n");
}

EvaluationTrace TraceStore::read_trace(const std::string& run_id,
                                       const std::string& student_id) const {
    const auto path = run_dir(run_id) / "traces" / (student_id + ".json");
    const nlohmann::json doc = read_json_file(path);
    if (!doc.contains("checksum") || !doc.contains("trace"))
        throw CorruptTraceError("trace file " + path.string() + " missing checksum envelope");
    const std::string expected = doc.at("checksum").get<std::string>();
    const std::string actual = fingerprint_hex(doc.at("trace").dump());
    if (expected != actual)
        throw CorruptTraceError("checksum mismatch in " + path.string());
    return trace_from_json(doc.at("trace"));
}

std::vector<EvaluationTrace> TraceStore::list_traces(const std::string& run_id) const {
    const auto dir = run_dir(run_id) / "traces";
    if (!std::filesystem::is_directory(dir))
        throw UnreadableFileError("run '" + run_id + "' has no traces directory");
    std::vector<std::string> ids;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            ids.push_back(entry.path().stem().string());
    std::sort(ids.begin(), ids.end());
    std::vector<EvaluationTrace> traces;
    traces.reserve(ids.size());
    for (const auto& id : ids) traces.push_back(read_trace(run_id, id));
    return traces;
}

std::vector<std::string> TraceStore::list_runs() const {
    std::vector<std::string> runs;
    for (const auto& entry : std::filesystem::directory_iterator(root_))
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "manifest.json"))
            runs.push_back(entry.path().filename().string());
    std::sort(runs.begin(), runs.end());
    return runs;
}

std::vector<std::pair<std::string, EvaluationTrace>> TraceStore::list_all() const {
    std::vector<std::pair<std::string, EvaluationTrace>> out;
    for (const auto& run_id : list_runs())
        for (auto& trace : list_traces(run_id)) out.emplace_back(run_id, std::move(trace));
    return out;
}

RunManifest TraceStore::read_manifest(const std::string& run_id) const {
    const auto path = run_dir(run_id) / "manifest.json";
    if (!std::filesystem::exists(path))
        throw UnreadableFileError("run '" + run_id + "' not found in store");
    return manifest_from_json(read_json_file(path));
}

ExportedScores export_scores(const Corpus& corpus, const TraceStore& store,
                             const std::string& run_id, ScoreMode mode, bool allow_partial) {
    const RunManifest manifest = store.read_manifest(run_id);

    struct Row {
        const Problem* problem;
        const SubmissionRecord* record;
        EvaluationTrace trace;
    };
    std::vector<Row> rows;
    std::vector<std::string> missing;
    for (const auto& problem : corpus.problems) {
        for (const auto& record : problem.submissions) {
            try {
                rows.push_back({&problem, &record,
                                store.read_trace(run_id, record.meta.student_id)});
            } catch (const UnreadableFileError&) {
                missing.push_back(record.meta.student_id);
            }
        }
    }
    if (!missing.empty() && !allow_partial) {
        std::string names;
        for (const auto& id : missing) names += (names.empty() ? "" : ", ") + id;
        throw MissingStudentsError("run '" + run_id + "' lacks traces for: " + names);
    }
    if (rows.empty()) throw EmptyRunError("run '" + run_id + "' produced no aligned pairs");

    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.record->meta.student_id < b.record->meta.student_id; });

    std::vector<Rational> base_values;
    std::vector<std::string> ids;
    for (const auto& row : rows) {
        base_values.push_back(row.record->truth.total);
        ids.push_back(row.record->meta.student_id);
    }

    std::vector<Rational> experiment_values;
    Rational experiment_scale;

    if (manifest.technique == Technique::QaMethodwise) {
        // Per problem, method scores collapse through scale_methodwise onto
        // the rubric total, which ingest guarantees equals the base scale.
        std::map<std::string, Rational> scaled_by_student;
        for (const auto& problem : corpus.problems) {
            std::vector<const Row*> problem_rows;
            for (const auto& row : rows)
                if (row.problem == &problem) problem_rows.push_back(&row);
            if (problem_rows.empty()) continue;
            if (problem.rubric.has_approach_alternatives())
                throw UsageError("method-wise export is undefined for approach-alternative rubrics");

            std::vector<const RubricNode*> methods;
            if (problem.rubric.children.empty()) methods.push_back(&problem.rubric);
            else
                for (const auto& child : problem.rubric.children) methods.push_back(&child);

            std::vector<Rational> method_max;
            for (const auto* m : methods) method_max.push_back(m->max_marks);

            std::vector<std::vector<Rational>> matrix;
            for (const auto* row : problem_rows) {
                if (!row->trace.method_scores)
                    throw CorruptTraceError("trace for '" + row->record->meta.student_id +
                                            "' lacks method scores");
                std::vector<Rational> cells;
                for (const auto* m : methods) {
                    const auto it = row->trace.method_scores->find(m->label);
                    cells.push_back(it == row->trace.method_scores->end() ? Rational(0)
                                                                          : it->second);
                }
                matrix.push_back(std::move(cells));
            }
            const ScoreVector scaled = scale_methodwise(
                MethodScoreMatrix(std::move(matrix), manifest.qa_scale, std::move(method_max)));
            for (std::size_t i = 0; i < problem_rows.size(); ++i)
                scaled_by_student[problem_rows[i]->record->meta.student_id] = scaled[i];
        }
        for (const auto& id : ids) experiment_values.push_back(scaled_by_student.at(id));
        experiment_scale = corpus.base_scale;
    } else {
        for (const auto& row : rows) {
            Rational value = row.trace.logical_total();
            if (mode == ScoreMode::LogicalPlusSyntax) {
                if (!row.trace.syntax_score)
                    throw UsageError("trace for '" + row.record->meta.student_id +
                                     "' has no syntax score; rerun grading with a toolchain");
                value += *row.trace.syntax_score;
            }
            experiment_values.push_back(value);
        }
        switch (manifest.technique) {
            case Technique::Fpm: experiment_scale = Rational(100); break;
            default: experiment_scale = corpus.base_scale; break;
        }
        if (mode == ScoreMode::LogicalPlusSyntax) {
            Rational syntax_max;
            bool first = true;
            for (const auto& row : rows) {
                if (!row.trace.syntax_max) continue;
                if (first) { syntax_max = *row.trace.syntax_max; first = false; }
                else if (!(syntax_max == *row.trace.syntax_max))
                    throw UsageError("traces disagree on syntax max marks");
            }
            experiment_scale += syntax_max;
        }
    }

    ExportedScores out{
        ScoreVector(std::move(base_values), corpus.base_scale, "base"),
        ScoreVector(std::move(experiment_values), experiment_scale,
                    to_string(manifest.technique)),
        std::move(ids), static_cast<int>(missing.size())};
    return out;
}

nlohmann::json exported_scores_to_json(const ExportedScores& scores) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["base_label"] = scores.base.label();
    doc["base_scale"] = rational_to_json(scores.base.scale_max());
    doc["experiment_label"] = scores.experiment.label();
    doc["experiment_scale"] = rational_to_json(scores.experiment.scale_max());
    doc["dropped"] = scores.dropped;
    nlohmann::json records = nlohmann::json::array();
    for (std::size_t i = 0; i < scores.student_ids.size(); ++i) {
        records.push_back({{"student_id", scores.student_ids[i]},
                           {"base", rational_to_json(scores.base[i])},
                           {"experiment", rational_to_json(scores.experiment[i])}});
    }
    doc["records"] = std::move(records);
    return doc;
}

ExportedScores exported_scores_from_json(const nlohmann::json& doc) {
    std::vector<Rational> base_values, experiment_values;
    std::vector<std::string> ids;
    for (const auto& record : doc.at("records")) {
        ids.push_back(record.at("student_id").get<std::string>());
        base_values.push_back(rational_from_json(record.at("base")));
        experiment_values.push_back(rational_from_json(record.at("experiment")));
    }
    return ExportedScores{
        ScoreVector(std::move(base_values), rational_from_json(doc.at("base_scale")),
                    doc.value("base_label", "base")),
        ScoreVector(std::move(experiment_values),
                    rational_from_json(doc.at("experiment_scale")),
                    doc.value("experiment_label", "experiment")),
        std::move(ids), doc.value("dropped", 0)};
}

}  // namespace gradekit
