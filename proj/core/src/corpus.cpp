#include "gradekit/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "gradekit/errors.hpp"

namespace gradekit {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UnreadableFileError("cannot read " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw UnreadableFileError("invalid JSON in " + path.string());
    return doc;
}

/// First file matching `stem.*` in `dir`, or empty path.
std::filesystem::path find_by_stem(const std::filesystem::path& dir, const std::string& stem) {
    std::vector<std::filesystem::path> hits;
    if (!std::filesystem::is_directory(dir)) return {};
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().stem() == stem)
            hits.push_back(entry.path());
    }
    std::sort(hits.begin(), hits.end());
    return hits.empty() ? std::filesystem::path{} : hits.front();
}

std::string language_from_extension(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".java") return "java";
    if (ext == ".cpp" || ext == ".cc" || ext == ".cxx") return "cpp";
    if (ext == ".c") return "c";
    if (ext == ".py") return "python";
    return ext.empty() ? "text" : ext.substr(1);
}

void validate_ground_truth(const Problem& problem, const GroundTruth& truth,
                           const std::string& location, std::vector<CorpusViolation>& out) {
    Rational sum(0);
    for (const auto& [path, marks] : truth.per_criterion_marks) {
        sum += marks;
        try {
            const RubricNode& node = resolve_path(problem.rubric, path);
            if (marks.is_negative() || marks > node.max_marks)
                out.push_back({location, "mark " + marks.to_string() + " at '" + path +
                                             "' outside [0, " + node.max_marks.to_string() + "]"});
        } catch (const UnknownPathError&) {
            out.push_back({location, "ground-truth path '" + path + "' not in rubric"});
        }
    }
    if (std::fabs((sum - truth.total).to_double()) > kMarksTolerance)
        out.push_back({location, "total " + truth.total.to_string() +
                                     " != sum of per-criterion marks " + sum.to_string()});
    for (const auto& [path, text] : truth.feedback) {
        (void)text;
        try {
            resolve_path(problem.rubric, path);
        } catch (const UnknownPathError&) {
            out.push_back({location, "feedback path '" + path + "' not in rubric"});
        }
    }
}

}  // namespace

const Problem& Corpus::problem(const std::string& id) const {
    for (const auto& p : problems)
        if (p.id == id) return p;
    throw UnknownPathError("no problem '" + id + "' in corpus");
}

const SubmissionRecord* Corpus::find_submission(const std::string& student_id) const {
    for (const auto& p : problems)
        for (const auto& s : p.submissions)
            if (s.meta.student_id == student_id) return &s;
    return nullptr;
}

std::size_t Corpus::submission_count() const {
    std::size_t n = 0;
    for (const auto& p : problems) n += p.submissions.size();
    return n;
}

IngestResult ingest(const std::filesystem::path& corpus_root) {
    if (!std::filesystem::is_directory(corpus_root))
        throw UnreadableFileError("corpus root " + corpus_root.string() + " is not a directory");
    const auto manifest_path = corpus_root / "manifest.json";
    if (!std::filesystem::exists(manifest_path))
        throw ManifestMissingError("no manifest.json under " + corpus_root.string());

    IngestResult result;
    Corpus& corpus = result.corpus;
    auto& violations = result.violations;

    const nlohmann::json manifest = read_json(manifest_path);
    corpus.root = corpus_root;
    corpus.dataset_id = manifest.value("dataset_id", "");
    if (corpus.dataset_id.empty())
        violations.push_back({"manifest", "dataset_id missing or empty"});
    if (!manifest.contains("base_scale")) {
        violations.push_back({"manifest", "base_scale missing"});
        corpus.base_scale = Rational(1);
    } else {
        corpus.base_scale = rational_from_json(manifest.at("base_scale"));
    }

    std::set<std::string> seen_students;
    for (const auto& id_json : manifest.value("problems", nlohmann::json::array())) {
        const std::string problem_id = id_json.get<std::string>();
        if (problem_id.find('/') != std::string::npos) {
            violations.push_back({problem_id, "problem id contains '/'"});
            continue;
        }
        const auto problem_dir = corpus_root / "problems" / problem_id;
        Problem problem;
        problem.id = problem_id;

        const auto statement = find_by_stem(problem_dir, "statement");
        if (statement.empty()) {
            violations.push_back({problem_id, "statement file missing"});
        } else {
            problem.statement = read_file(statement);
        }

        const auto scaffold = find_by_stem(problem_dir, "scaffold");
        if (!scaffold.empty()) problem.scaffold = read_file(scaffold);

        const auto rubric_path = problem_dir / "rubric.json";
        if (!std::filesystem::exists(rubric_path)) {
            violations.push_back({problem_id, "rubric.json missing"});
            continue;
        }
        try {
            problem.rubric = parse_rubric(read_json(rubric_path));
        } catch (const Error& e) {
            violations.push_back({problem_id, std::string("rubric: ") + e.what()});
            continue;
        }
        for (const auto& v : validate_rubric(problem.rubric))
            violations.push_back({problem_id, "rubric " + (v.path.empty() ? "<root>" : v.path) +
                                                  ": " + v.message});

        if (std::fabs((problem.rubric.max_marks - corpus.base_scale).to_double()) >
            kMarksTolerance)
            violations.push_back({problem_id,
                                  "rubric root max " + problem.rubric.max_marks.to_string() +
                                      " != manifest base_scale " + corpus.base_scale.to_string()});

        const auto solution = find_by_stem(problem_dir, "solution");
        if (solution.empty()) {
            violations.push_back({problem_id, "model solution missing"});
        } else {
            problem.model_solution = read_file(solution);
            problem.language_tag = language_from_extension(solution);
        }

        const auto submissions_dir = problem_dir / "submissions";
        if (std::filesystem::is_directory(submissions_dir)) {
            std::vector<std::filesystem::path> student_dirs;
            for (const auto& entry : std::filesystem::directory_iterator(submissions_dir))
                if (entry.is_directory()) student_dirs.push_back(entry.path());
            std::sort(student_dirs.begin(), student_dirs.end());

            for (const auto& dir : student_dirs) {
                const std::string student_id = dir.filename().string();
                const std::string location = problem_id + "/" + student_id;
                SubmissionRecord record;
                record.meta.student_id = student_id;
                record.meta.problem_id = problem_id;

                const auto code = find_by_stem(dir, "code");
                if (code.empty()) {
                    violations.push_back({location, "code file missing"});
                    continue;
                }
                record.code = read_file(code);
                record.meta.source_path = code.string();
                record.meta.language_tag = language_from_extension(code);

                const auto grade_path = dir / "grade.json";
                if (!std::filesystem::exists(grade_path)) {
                    violations.push_back({location, "grade.json missing"});
                    continue;
                }
                try {
                    record.truth = ground_truth_from_json(read_json(grade_path));
                } catch (const std::exception& e) {
                    violations.push_back({location, std::string("grade.json: ") + e.what()});
                    continue;
                }
                if (record.truth.student_id != student_id)
                    violations.push_back({location, "grade.json student_id '" +
                                                        record.truth.student_id +
                                                        "' != directory name"});
                if (!seen_students.insert(student_id).second)
                    violations.push_back({location, "duplicate student_id across corpus"});
                validate_ground_truth(problem, record.truth, location, violations);
                problem.submissions.push_back(std::move(record));
            }
        } else {
            violations.push_back({problem_id, "submissions/ directory missing"});
        }
        corpus.problems.push_back(std::move(problem));
    }

    if (corpus.problems.empty())
        violations.push_back({"manifest", "no problems listed"});
    return result;
}

}  // namespace gradekit
