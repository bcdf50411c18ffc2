#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gradekit {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// rubric_core
class MalformedTreeError : public Error { public: using Error::Error; };
class NegativeMarkError : public Error { public: using Error::Error; };
class UnknownPathError : public Error { public: using Error::Error; };

// preprocess / agreement
class ZeroScaleError : public Error { public: using Error::Error; };
class ScaleMismatchError : public Error { public: using Error::Error; };
class DimensionMismatchError : public Error { public: using Error::Error; };
class TooFewPointsError : public Error { public: using Error::Error; };

// llm_gateway
class MissingSlotError : public Error { public: using Error::Error; };
class NoJsonFoundError : public Error { public: using Error::Error; };
class UnbalancedBracesError : public Error { public: using Error::Error; };
class SchemaViolationError : public Error {
public:
    SchemaViolationError(std::string field_path, const std::string& message)
        : Error(field_path.empty() ? message : field_path + ": " + message),
          field_path_(std::move(field_path)) {}
    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};
class TransportError : public Error { public: using Error::Error; };
class RateLimitedError : public Error { public: using Error::Error; };
class UnknownPromptError : public Error { public: using Error::Error; };

/// Thrown after a request kept failing validation for the whole retry budget.
/// Keeps every attempt's raw text so traces can retain the evidence.
class ExhaustedRetriesError : public Error {
public:
    ExhaustedRetriesError(const std::string& what, std::vector<std::string> attempts)
        : Error(what), attempts_(std::move(attempts)) {}
    const std::vector<std::string>& attempts() const { return attempts_; }

private:
    std::vector<std::string> attempts_;
};

// syntax_agent
class ToolchainMissingError : public Error { public: using Error::Error; };

// graders
class UnmappableCriterionError : public Error { public: using Error::Error; };
class ApproachNotInRubricError : public Error { public: using Error::Error; };
class MemberFailureError : public Error { public: using Error::Error; };

// dataset_io
class UnreadableFileError : public Error { public: using Error::Error; };
class ManifestMissingError : public Error { public: using Error::Error; };
class DuplicateRunIdError : public Error { public: using Error::Error; };
class CorruptTraceError : public Error { public: using Error::Error; };
class MissingStudentsError : public Error { public: using Error::Error; };

// cli_reporting
class EmptyRunError : public Error { public: using Error::Error; };
class NotAnEmeRunError : public Error { public: using Error::Error; };
class UsageError : public Error { public: using Error::Error; };

}  // namespace gradekit
