#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gradekit/rational.hpp"

namespace gradekit {

struct CompileOutcome {
    bool ok = false;
    int error_count = 0;
    std::string transcript;
    std::string toolchain_id;
    bool timed_out = false;
};

struct PenaltyPolicy {
    Rational max_syntax_marks{5};
    Rational penalty_per_error{1, 2};
};

/// One compiler adapter: how to invoke it and how to read its diagnostics.
/// `command` is an argv template; "{file}" is replaced by the source path.
/// Diagnostics are counted by `error_pattern` matches per transcript line;
/// when `summary_pattern` is set and matches (first capture = count), the
/// summary wins.
struct ToolchainConfig {
    std::string id;
    std::vector<std::string> command;
    std::string error_pattern = "\\berror:";
    std::optional<std::string> summary_pattern;
    std::chrono::milliseconds timeout{20000};
    bool redact_paths = true;
};

ToolchainConfig gcc_toolchain();
ToolchainConfig gxx_toolchain();
ToolchainConfig clangxx_toolchain();
ToolchainConfig javac_toolchain();

/// Picks the configured adapter for a language tag, if one is known.
std::optional<ToolchainConfig> toolchain_for_language(const std::string& language_tag);

/// Compile-only syntax check of one source file, run as a sandboxed
/// subprocess in a scratch working directory with a hard timeout. Student
/// code is never executed. Timeout is not an error: it comes back as
/// ok=false with the partial transcript.
CompileOutcome compile_file(const std::filesystem::path& source, const ToolchainConfig& toolchain);

/// Same, for in-memory sources: materializes the text under a scratch dir.
CompileOutcome compile_source(const std::string& source_text, const std::string& filename,
                              const ToolchainConfig& toolchain);

/// max(0, S_max - penalty * errors).
Rational syntax_score(const CompileOutcome& outcome, const PenaltyPolicy& policy);

/// Outcome used when no toolchain is configured: trivially ok, marked so in
/// the transcript.
CompileOutcome no_compile_outcome();

namespace detail {
struct ProcessResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
    bool timed_out = false;
    bool exec_failed = false;
};
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& working_dir,
                          std::chrono::milliseconds timeout);
int count_errors(const std::string& transcript, const ToolchainConfig& toolchain);
}  // namespace detail

}  // namespace gradekit
