#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gradekit/report.hpp"

namespace {

const std::string kCli = GRADEKIT_CLI_PATH;
const std::filesystem::path kFixtures = GRADEKIT_FIXTURES_DIR;

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        path = std::filesystem::temp_directory_path() / ("gradekit-cli-" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CliResult run_cli(const std::string& args) {
    static std::mt19937_64 rng{std::random_device{}()};
    const auto out_path =
        std::filesystem::temp_directory_path() / ("cli-out-" + std::to_string(rng()));
    const auto err_path =
        std::filesystem::temp_directory_path() / ("cli-err-" + std::to_string(rng()));
    const std::string command =
        kCli + " " + args + " > " + out_path.string() + " 2> " + err_path.string();
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return result;
}

// Byte-compare two directory trees (paths relative to the roots).
bool trees_identical(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::vector<std::filesystem::path> files_a, files_b;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(a))
        if (entry.is_regular_file()) files_a.push_back(std::filesystem::relative(entry.path(), a));
    for (const auto& entry : std::filesystem::recursive_directory_iterator(b))
        if (entry.is_regular_file()) files_b.push_back(std::filesystem::relative(entry.path(), b));
    std::sort(files_a.begin(), files_a.end());
    std::sort(files_b.begin(), files_b.end());
    if (files_a != files_b) return false;
    for (const auto& rel : files_a)
        if (slurp(a / rel) != slurp(b / rel)) return false;
    return true;
}

const std::string kOopCorpus = (kFixtures / "corpus_oop").string();
const std::string kDsaCorpus = (kFixtures / "corpus_dsa").string();

}  // namespace

TEST_CASE("validate reports a clean fixture corpus") {
    const CliResult result = run_cli("validate --corpus " + kOopCorpus);
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("0 violation(s), 10 submission(s), 1 problem(s)") != std::string::npos);
}

TEST_CASE("grade with the mock backend writes one trace per submission") {
    TempDir tmp;
    const std::string store = (tmp.path / "store").string();
    const CliResult result = run_cli("grade --corpus " + kOopCorpus + " --store " + store +
                                     " --technique cre --run-id r1");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("10 of 10 submissions graded") != std::string::npos);
    int trace_files = 0;
    for (const auto& entry :
         std::filesystem::directory_iterator(tmp.path / "store" / "r1" / "traces"))
        if (entry.path().extension() == ".json") ++trace_files;
    CHECK(trace_files == 10);
}

TEST_CASE("rerunning the same run id is a data violation") {
    TempDir tmp;
    const std::string store = (tmp.path / "store").string();
    const std::string args = "grade --corpus " + kOopCorpus + " --store " + store +
                             " --technique cre --run-id dup";
    CHECK(run_cli(args).exit_code == 0);
    const CliResult second = run_cli(args);
    CHECK(second.exit_code == 2);
    CHECK(second.err.find("already exists") != std::string::npos);
}

TEST_CASE("unknown technique is a usage error") {
    TempDir tmp;
    const CliResult result = run_cli("grade --corpus " + kOopCorpus + " --store " +
                                     (tmp.path / "s").string() + " --technique zre --run-id x");
    CHECK(result.exit_code == 1);
}

TEST_CASE("missing required flags and bad subcommands exit with the usage code") {
    CHECK(run_cli("grade").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("metrics on a ground-truth run prints a row of ones and zero leniency") {
    TempDir tmp;
    const std::string store = (tmp.path / "store").string();
    REQUIRE(run_cli("grade --corpus " + kOopCorpus + " --store " + store +
                    " --technique eme --run-id gt")
                .exit_code == 0);
    const CliResult result =
        run_cli("metrics --corpus " + kOopCorpus + " --store " + store + " --run-id gt");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("EME") != std::string::npos);
    CHECK(result.out.find("1.000") != std::string::npos);
    CHECK(result.out.find("0.000") != std::string::npos);  // leniency

    // Machine report exists and parses back losslessly.
    const auto report_path = tmp.path / "store" / "gt" / "reports" / "report_logical_K5.json";
    REQUIRE(std::filesystem::exists(report_path));
    const nlohmann::json doc = nlohmann::json::parse(slurp(report_path));
    const gradekit::AgreementReport report = gradekit::report_from_json(doc);
    CHECK(*report.pearson == 1.0);
    CHECK(*report.leniency == 0.0);
    CHECK(doc == gradekit::report_to_json(report, doc.at("method").get<std::string>()));
}

TEST_CASE("metrics with K=4 and K=6 differ only in kappa") {
    TempDir tmp;
    const std::string store = (tmp.path / "store").string();

    // Grade against the original truth, then compare against a shifted corpus
    // whose s05/s07 grades are swapped, so base and experiment disagree and
    // kappa has something to be sensitive to.
    REQUIRE(run_cli("grade --corpus " + kOopCorpus + " --store " + store +
                    " --technique cre --run-id sens")
                .exit_code == 0);

    const auto shifted = tmp.path / "shifted";
    std::filesystem::copy(kOopCorpus, shifted, std::filesystem::copy_options::recursive);
    const auto sub_dir = shifted / "problems/cricket/submissions";
    nlohmann::json g05 = nlohmann::json::parse(slurp(sub_dir / "s05/grade.json"));
    nlohmann::json g07 = nlohmann::json::parse(slurp(sub_dir / "s07/grade.json"));
    std::swap(g05["per_criterion_marks"], g07["per_criterion_marks"]);
    std::swap(g05["total"], g07["total"]);
    std::swap(g05["feedback"], g07["feedback"]);
    std::ofstream(sub_dir / "s05/grade.json") << g05.dump(2);
    std::ofstream(sub_dir / "s07/grade.json") << g07.dump(2);

    const std::string base_args =
        "metrics --corpus " + shifted.string() + " --store " + store + " --run-id sens";
    REQUIRE(run_cli(base_args + " --bins 4").exit_code == 0);
    REQUIRE(run_cli(base_args + " --bins 6").exit_code == 0);

    const nlohmann::json k4 = nlohmann::json::parse(
        slurp(tmp.path / "store/sens/reports/report_logical_K4.json"));
    const nlohmann::json k6 = nlohmann::json::parse(
        slurp(tmp.path / "store/sens/reports/report_logical_K6.json"));
    for (const char* field : {"pearson", "spearman", "kendall_tau_b", "leniency", "icc1",
                              "icc2", "icc3", "n"})
        CHECK(k4.at(field) == k6.at(field));
    CHECK(k4.at("kappa") != k6.at("kappa"));
    // Hand-computed on the swapped fixture: 0.54/0.74 and 0.62/0.82.
    CHECK(k4.at("kappa").get<double>() == doctest::Approx(0.54 / 0.74).epsilon(1e-9));
    CHECK(k6.at("kappa").get<double>() == doctest::Approx(0.62 / 0.82).epsilon(1e-9));
}

TEST_CASE("analytics missed ranks criteria by miss rate") {
    TempDir tmp;
    const std::string store = (tmp.path / "store").string();
    REQUIRE(run_cli("grade --corpus " + kOopCorpus + " --store " + store +
                    " --technique cre --run-id m1")
                .exit_code == 0);
    const CliResult result = run_cli("analytics missed --store " + store + " --run-id m1 --top 3");
    CHECK(result.exit_code == 0);
    // s10 scores zero everywhere; every step has at least one miss. Step 1 is
    // missed by s02, s06, s08, s09, s10 -> rate 0.5, the highest.
    const auto first_data_line = result.out.find('\n') + 1;
    CHECK(result.out.substr(first_data_line, 5) == "0.500");
    CHECK(result.out.find("Step 1") != std::string::npos);
}

TEST_CASE("analytics confidence flags low-confidence approach identifications") {
    TempDir tmp;
    const std::string store = (tmp.path / "store").string();
    REQUIRE(run_cli("grade --corpus " + kDsaCorpus + " --store " + store +
                    " --technique eme --run-id e1")
                .exit_code == 0);
    const CliResult none = run_cli("analytics confidence --store " + store + " --run-id e1");
    CHECK(none.exit_code == 0);
    CHECK(none.out.find("0 trace(s) below threshold") != std::string::npos);

    // threshold 0 -> nothing can be below it; threshold 1 -> ground-truth
    // mock reports confidence 1.0, still nothing strictly below.
    const CliResult full = run_cli("analytics confidence --store " + store +
                                   " --run-id e1 --threshold 1.0");
    CHECK(full.out.find("0 trace(s) below threshold") != std::string::npos);

    // Non-EME runs are rejected.
    REQUIRE(run_cli("grade --corpus " + kDsaCorpus + " --store " + store +
                    " --technique fpm --run-id f1")
                .exit_code == 0);
    const CliResult wrong = run_cli("analytics confidence --store " + store + " --run-id f1");
    CHECK(wrong.exit_code == 2);
}

TEST_CASE("a backend that never validates exits with the exhaustion code") {
    TempDir tmp;
    const auto script = tmp.path / "script.json";
    std::ofstream(script) << R"({"*": "this is never valid json"})";
    const auto config = tmp.path / "config.json";
    std::ofstream(config) << R"({"backend": {"kind": "mock-script", "script_path": ")" +
                                 script.string() + R"("}, "gateway": {"max_retries": 2}})";
    const CliResult result = run_cli("grade --corpus " + kOopCorpus + " --store " +
                                     (tmp.path / "store").string() +
                                     " --technique cre --run-id boom --config " + config.string());
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("FAILED") != std::string::npos);
}

TEST_CASE("metrics writes an exact score export next to the report") {
    TempDir tmp;
    const std::string store = (tmp.path / "store").string();
    REQUIRE(run_cli("grade --corpus " + kOopCorpus + " --store " + store +
                    " --technique cre --run-id sc")
                .exit_code == 0);
    REQUIRE(run_cli("metrics --corpus " + kOopCorpus + " --store " + store + " --run-id sc")
                .exit_code == 0);
    const auto scores_path = tmp.path / "store/sc/reports/scores_logical.json";
    REQUIRE(std::filesystem::exists(scores_path));
    const nlohmann::json doc = nlohmann::json::parse(slurp(scores_path));
    CHECK(doc.at("records").size() == 10);
    CHECK(doc.at("records")[0].at("student_id") == "s01");
    CHECK(doc.at("records")[0].at("base") == doc.at("records")[0].at("experiment"));
}

TEST_CASE("two identical grade+metrics runs are byte-identical") {
    TempDir tmp;
    const std::string store_a = (tmp.path / "a").string();
    const std::string store_b = (tmp.path / "b").string();
    for (const std::string& store : {store_a, store_b}) {
        REQUIRE(run_cli("grade --corpus " + kOopCorpus + " --store " + store +
                        " --technique eme --run-id det --concurrency 4")
                    .exit_code == 0);
        REQUIRE(run_cli("metrics --corpus " + kOopCorpus + " --store " + store +
                        " --run-id det")
                    .exit_code == 0);
    }
    CHECK(trees_identical(tmp.path / "a", tmp.path / "b"));
}

TEST_CASE("syntax agent end-to-end: toolchain g++, logical+syntax metrics") {
    if (std::system("command -v g++ > /dev/null 2>&1") != 0) {
        WARN("g++ not available; skipping");
        return;
    }
    TempDir tmp;
    const std::string store = (tmp.path / "store").string();
    const std::string cpp_corpus = (kFixtures / "corpus_cpp").string();
    REQUIRE(run_cli("grade --corpus " + cpp_corpus + " --store " + store +
                    " --technique cre --run-id syn --toolchain g++")
                .exit_code == 0);

    // c01 compiles cleanly -> full syntax marks; c03 is broken -> penalized.
    const nlohmann::json clean =
        nlohmann::json::parse(slurp(tmp.path / "store/syn/traces/c01.json"));
    CHECK(clean.at("trace").at("syntax_score") == 5);
    const nlohmann::json broken =
        nlohmann::json::parse(slurp(tmp.path / "store/syn/traces/c03.json"));
    REQUIRE(broken.at("trace").contains("syntax_score"));
    CHECK(broken.at("trace").at("syntax_score") != 5);

    const CliResult metrics =
        run_cli("metrics --corpus " + cpp_corpus + " --store " + store +
                " --run-id syn --mode logical+syntax");
    CHECK(metrics.exit_code == 0);
    // N=3 < K=5, so kappa is undefined and rendered as such, not fatal.
    CHECK(metrics.out.find("undef") != std::string::npos);
    const auto report_path = tmp.path / "store/syn/reports/report_logical-syntax_K5.json";
    REQUIRE(std::filesystem::exists(report_path));
    CHECK(nlohmann::json::parse(slurp(report_path)).at("kappa").is_null());
}

TEST_CASE("grade stdout is deterministic across runs") {
    TempDir tmp;
    const CliResult first = run_cli("grade --corpus " + kOopCorpus + " --store " +
                                    (tmp.path / "s1").string() + " --technique cre --run-id r");
    const CliResult second = run_cli("grade --corpus " + kOopCorpus + " --store " +
                                     (tmp.path / "s2").string() + " --technique cre --run-id r");
    // Store paths differ only in the summary line; compare the per-student lines.
    const auto strip_last = [](const std::string& text) {
        const auto pos = text.rfind("\n", text.size() - 2);
        return text.substr(0, pos);
    };
    CHECK(strip_last(first.out) == strip_last(second.out));
}
