#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "gradekit/corpus.hpp"
#include "gradekit/preprocess.hpp"
#include "gradekit/trace.hpp"

namespace gradekit {

struct RunManifest {
    std::string run_id;
    Technique technique = Technique::Cre;
    std::string config_fingerprint;
    std::string dataset_id;
    Rational qa_scale{4};  // R_E used by QA method-wise grading
    std::vector<std::string> student_ids;
};

/// Append-only on-disk store of grading runs:
///
///   store_root/<run_id>/manifest.json
///   store_root/<run_id>/traces/<student_id>.json   (checksummed, immutable)
///
/// Raw model text is redacted against the credential pattern list at write
/// time; everything else round-trips byte-exactly.
class TraceStore {
public:
    explicit TraceStore(std::filesystem::path root);

    void create_run(const RunManifest& manifest);              // DuplicateRunIdError
    void write_trace(const std::string& run_id, const EvaluationTrace& trace);
    EvaluationTrace read_trace(const std::string& run_id, const std::string& student_id) const;
    std::vector<EvaluationTrace> list_traces(const std::string& run_id) const;  // by student_id
    std::vector<std::pair<std::string, EvaluationTrace>> list_all() const;      // by (run, student)
    std::vector<std::string> list_runs() const;
    RunManifest read_manifest(const std::string& run_id) const;
    bool has_run(const std::string& run_id) const;

    const std::filesystem::path& root() const { return root_; }

    /// Regexes whose matches are replaced with [REDACTED] in raw responses.
    void set_redaction_patterns(std::vector<std::string> patterns);

private:
    std::filesystem::path run_dir(const std::string& run_id) const;
    std::string redact(const std::string& text) const;

    std::filesystem::path root_;
    std::vector<std::string> redaction_patterns_;
    mutable std::mutex write_mutex_;
};

enum class ScoreMode { Logical, LogicalPlusSyntax };

ScoreMode score_mode_from_string(const std::string& text);
std::string to_string(ScoreMode mode);

struct ExportedScores {
    ScoreVector base;
    ScoreVector experiment;
    std::vector<std::string> student_ids;
    int dropped = 0;
};

/// Aligned (base, experiment) vectors for one run, ordered by student_id.
/// The experiment vector sits on the technique's native scale (rubric total
/// for CRE/PRE/EME, 100 for FPM); QA method scores go through
/// scale_methodwise so the result is already on the base scale. Missing
/// students throw unless allow_partial, which drops the pair and counts it.
ExportedScores export_scores(const Corpus& corpus, const TraceStore& store,
                             const std::string& run_id, ScoreMode mode,
                             bool allow_partial = false);

/// Score-file format: one record per student, exact values.
nlohmann::json exported_scores_to_json(const ExportedScores& scores);
ExportedScores exported_scores_from_json(const nlohmann::json& doc);

}  // namespace gradekit
