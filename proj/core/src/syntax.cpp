#include "gradekit/syntax.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "gradekit/errors.hpp"

namespace gradekit {

namespace detail {

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& working_dir,
                          std::chrono::milliseconds timeout) {
    if (argv.empty()) throw ToolchainMissingError("empty toolchain command");

    int pipe_fds[2];
    if (pipe(pipe_fds) != 0) throw Error("pipe() failed");

    const pid_t pid = fork();
    if (pid < 0) {
        close(pipe_fds[0]);
        close(pipe_fds[1]);
        throw Error("fork() failed");
    }

    if (pid == 0) {
        // Child: merge stdout+stderr into the pipe, drop stdin, chdir, exec.
        close(pipe_fds[0]);
        dup2(pipe_fds[1], STDOUT_FILENO);
        dup2(pipe_fds[1], STDERR_FILENO);
        close(pipe_fds[1]);
        const int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) { dup2(devnull, STDIN_FILENO); close(devnull); }
        if (!working_dir.empty()) {
            if (chdir(working_dir.c_str()) != 0) _exit(126);
        }
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        // exec failed; emit a marker the parent can recognize.
        const char* msg = "gradekit-exec-failed\n";
        ssize_t ignored = write(STDERR_FILENO, msg, strlen(msg));
        (void)ignored;
        _exit(127);
    }

    close(pipe_fds[1]);
    ProcessResult result;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    char buffer[4096];

    while (true) {
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            result.timed_out = true;
            kill(pid, SIGKILL);
        }
        struct pollfd pfd{pipe_fds[0], POLLIN, 0};
        const int rc = poll(&pfd, 1, result.timed_out ? 100 : static_cast<int>(
                                         std::min<std::int64_t>(remaining.count(), 200)));
        if (rc > 0 && (pfd.revents & (POLLIN | POLLHUP))) {
            const ssize_t n = read(pipe_fds[0], buffer, sizeof buffer);
            if (n > 0) {
                result.output.append(buffer, static_cast<std::size_t>(n));
                continue;
            }
            if (n == 0) break;  // child closed its end
        }
        if (result.timed_out) break;
    }
    close(pipe_fds[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);

    if (result.exit_code == 127 &&
        result.output.find("gradekit-exec-failed") != std::string::npos)
        result.exec_failed = true;
    return result;
}

int count_errors(const std::string& transcript, const ToolchainConfig& toolchain) {
    if (toolchain.summary_pattern) {
        const std::regex summary(*toolchain.summary_pattern);
        std::smatch match;
        if (std::regex_search(transcript, match, summary) && match.size() > 1)
            return std::stoi(match[1].str());
    }
    const std::regex pattern(toolchain.error_pattern);
    int count = 0;
    std::istringstream lines(transcript);
    std::string line;
    while (std::getline(lines, line))
        if (std::regex_search(line, pattern)) ++count;
    return count;
}

}  // namespace detail

namespace {

std::filesystem::path make_scratch_dir() {
    static std::mt19937_64 rng{std::random_device{}()};
    const auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 64; ++i) {
        const auto dir = base / ("gradekit-compile-" + std::to_string(rng()));
        std::error_code ec;
        if (std::filesystem::create_directory(dir, ec)) return dir;
    }
    throw Error("cannot create scratch directory for compilation");
}

void replace_all_in(std::string& text, const std::string& from, const std::string& to) {
    if (from.empty()) return;
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

struct ScratchDir {
    std::filesystem::path path;
    explicit ScratchDir() : path(make_scratch_dir()) {}
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
};

}  // namespace

ToolchainConfig gcc_toolchain() {
    ToolchainConfig t;
    t.id = "gcc";
    t.command = {"gcc", "-fsyntax-only", "{file}"};
    return t;
}

ToolchainConfig gxx_toolchain() {
    ToolchainConfig t;
    t.id = "g++";
    t.command = {"g++", "-std=c++20", "-fsyntax-only", "{file}"};
    return t;
}

ToolchainConfig clangxx_toolchain() {
    ToolchainConfig t;
    t.id = "clang++";
    t.command = {"clang++", "-std=c++20", "-fsyntax-only", "{file}"};
    return t;
}

ToolchainConfig javac_toolchain() {
    ToolchainConfig t;
    t.id = "javac";
    t.command = {"javac", "-nowarn", "{file}"};
    t.summary_pattern = "([0-9]+) errors?";
    return t;
}

std::optional<ToolchainConfig> toolchain_for_language(const std::string& language_tag) {
    if (language_tag == "c") return gcc_toolchain();
    if (language_tag == "cpp") return gxx_toolchain();
    if (language_tag == "java") return javac_toolchain();
    return std::nullopt;
}

CompileOutcome compile_file(const std::filesystem::path& source,
                            const ToolchainConfig& toolchain) {
    if (toolchain.command.empty())
        throw ToolchainMissingError("toolchain '" + toolchain.id + "' has no command");
    if (!std::filesystem::exists(source))
        throw UnreadableFileError("source file " + source.string() + " does not exist");

    const auto absolute = std::filesystem::absolute(source);
    std::vector<std::string> argv;
    argv.reserve(toolchain.command.size());
    for (const auto& part : toolchain.command) {
        std::string expanded = part;
        replace_all_in(expanded, "{file}", absolute.string());
        argv.push_back(std::move(expanded));
    }

    ScratchDir scratch;
    auto result = detail::run_process(argv, scratch.path, toolchain.timeout);
    if (result.exec_failed)
        throw ToolchainMissingError("cannot execute '" + argv.front() + "'");

    CompileOutcome outcome;
    outcome.toolchain_id = toolchain.id;
    outcome.timed_out = result.timed_out;
    outcome.transcript = std::move(result.output);
    if (toolchain.redact_paths) {
        replace_all_in(outcome.transcript, absolute.parent_path().string() + "/", "");
        replace_all_in(outcome.transcript, scratch.path.string() + "/", "");
    }
    if (result.timed_out) outcome.transcript += "\n[compilation timed out]";

    outcome.ok = !result.timed_out && result.exit_code == 0;
    outcome.error_count = outcome.ok ? 0 : detail::count_errors(outcome.transcript, toolchain);
    if (!outcome.ok && outcome.error_count == 0 && !outcome.transcript.empty())
        outcome.error_count = 1;  // failed without a recognizable diagnostic
    return outcome;
}

CompileOutcome compile_source(const std::string& source_text, const std::string& filename,
                              const ToolchainConfig& toolchain) {
    ScratchDir scratch;
    const auto path = scratch.path / filename;
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw UnreadableFileError("cannot write scratch source " + path.string());
        out << source_text;
    }
    return compile_file(path, toolchain);
}

Rational syntax_score(const CompileOutcome& outcome, const PenaltyPolicy& policy) {
    if (policy.max_syntax_marks.is_negative() || policy.penalty_per_error.is_negative())
        throw UsageError("penalty policy values must be non-negative");
    const Rational raw =
        policy.max_syntax_marks - policy.penalty_per_error * Rational(outcome.error_count);
    return raw.is_negative() ? Rational(0) : raw;
}

CompileOutcome no_compile_outcome() {
    CompileOutcome outcome;
    outcome.ok = true;
    outcome.error_count = 0;
    outcome.transcript = "(submission was not compiled; no toolchain configured)";
    outcome.toolchain_id = "none";
    return outcome;
}

}  // namespace gradekit
