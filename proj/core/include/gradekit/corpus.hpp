#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gradekit/rubric.hpp"
#include "gradekit/trace.hpp"

namespace gradekit {

struct SubmissionRecord {
    Submission meta;
    std::string code;
    GroundTruth truth;
};

struct Problem {
    std::string id;
    std::string statement;
    std::optional<std::string> scaffold;
    RubricNode rubric;
    std::string model_solution;
    std::string language_tag;
    std::vector<SubmissionRecord> submissions;
};

/// A fully loaded corpus. Layout on disk:
///
///   corpus_root/
///     manifest.json                {"schema_version", "dataset_id",
///                                   "base_scale", "problems": [ids]}
///     problems/<id>/
///       statement.md | statement.txt
///       scaffold.<ext>             optional
///       rubric.json                RubricNode tree
///       solution.<ext>
///       submissions/<student_id>/
///         code.<ext>
///         grade.json               GroundTruth
struct Corpus {
    std::filesystem::path root;
    std::string dataset_id;
    Rational base_scale;
    std::vector<Problem> problems;

    const Problem& problem(const std::string& id) const;
    const SubmissionRecord* find_submission(const std::string& student_id) const;
    std::size_t submission_count() const;
};

struct CorpusViolation {
    std::string location;  // "problem_id" or "problem_id/student_id"
    std::string message;
};

struct IngestResult {
    Corpus corpus;
    std::vector<CorpusViolation> violations;
};

/// Loads and cross-validates everything under `corpus_root`. Structural
/// defects (bad totals, unresolvable paths, rubric violations, duplicate
/// students) come back as data; unreadable/missing files throw.
IngestResult ingest(const std::filesystem::path& corpus_root);

}  // namespace gradekit
