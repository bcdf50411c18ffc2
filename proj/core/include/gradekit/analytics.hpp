#pragma once

#include <string>
#include <vector>

#include "gradekit/trace.hpp"

namespace gradekit {

struct MissedCriterion {
    std::string path;  // prefixed with "<problem_id>/" when traces span problems
    int zero_count = 0;
    int graded_count = 0;
    double miss_rate = 0.0;
};

/// Per criterion, the fraction of graded students who scored 0 on it.
/// Descending by rate, ties broken by path. top_k < 0 returns everything.
std::vector<MissedCriterion> missed_criteria(const std::vector<EvaluationTrace>& traces,
                                             int top_k = -1);

struct LowConfidenceEntry {
    std::string student_id;
    std::string approach;
    double confidence = 0.0;
};

/// Traces whose approach identification landed below `threshold`, ordered by
/// student_id. Throws NotAnEmeRunError when no trace carries identification.
std::vector<LowConfidenceEntry> low_confidence_traces(const std::vector<EvaluationTrace>& traces,
                                                      double threshold);

}  // namespace gradekit
