#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gradekit/rational.hpp"

namespace gradekit {

/// One node of a weighted criteria tree. Leaves carry the points a grader can
/// award; internal nodes group them. Children that all carry an
/// `approach_group` tag are alternative solutions: the parent is worth the
/// best approach, not the sum.
struct RubricNode {
    std::string label;
    Rational max_marks;
    std::vector<RubricNode> children;
    std::optional<std::string> approach_group;

    bool is_leaf() const { return children.empty(); }

    /// True when the children are alternative approaches (DSA-style rubric).
    bool has_approach_alternatives() const;
};

struct RubricViolation {
    std::string path;     // "/"-joined labels below the root; "" is the root
    std::string message;
};

/// Fixed scale of a question-agnostic rubric (R_E): 4 for holistic 0-4
/// grading, 100 for the five-category scheme.
class QuestionAgnosticScale {
public:
    explicit QuestionAgnosticScale(int scale_max) : scale_max_(scale_max) {
        if (scale_max < 1) throw ZeroScaleError("question-agnostic scale must be >= 1");
    }
    int scale_max() const { return scale_max_; }
    Rational as_rational() const { return Rational(scale_max_); }

private:
    int scale_max_;
};

/// Tolerance used when checking that an internal node's marks equal the sum
/// of its children. Sums are exact rationals, but rubric files may carry
/// independently rounded decimals.
inline constexpr double kMarksTolerance = 1e-9;

std::vector<RubricViolation> validate_rubric(const RubricNode& root);

/// Walks "/"-joined child labels below `root`. The empty path is the root.
/// Throws UnknownPathError when any component fails to match.
const RubricNode& resolve_path(const RubricNode& root, std::string_view path);

/// Depth-first (path, node) list of all leaves.
std::vector<std::pair<std::string, const RubricNode*>> rubric_leaves(const RubricNode& root);

/// Sums every leaf mark of a nested criterion tree. A leaf is either a bare
/// number or an object carrying a "Marks" key; any other terminal shape is a
/// MalformedTreeError. Totals stay exact: JSON numbers are re-read as
/// rationals from their decimal form.
Rational aggregate_marks(const nlohmann::json& tree);

std::vector<std::string> split_path(std::string_view path);
std::string join_path(const std::vector<std::string>& components);

/// Rubric file schema: {"label": str, "max_marks": int|string, "children":
/// [...], "approach_group": str?}. Marks accept "n/d" and decimal strings.
RubricNode parse_rubric(const nlohmann::json& doc);
nlohmann::json rubric_to_json(const RubricNode& root);

/// Indented plain-text rendering used to fill rubric prompt slots.
std::string rubric_to_text(const RubricNode& root);

/// Rational <-> JSON used across every persisted schema. Integers are stored
/// as JSON integers, everything else as an exact string ("2.5" or "1/3").
nlohmann::json rational_to_json(const Rational& value);
Rational rational_from_json(const nlohmann::json& value);

}  // namespace gradekit
