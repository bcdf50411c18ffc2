#include "gradekit/analytics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gradekit/errors.hpp"

namespace gradekit {

std::vector<MissedCriterion> missed_criteria(const std::vector<EvaluationTrace>& traces,
                                             int top_k) {
    if (traces.empty()) throw EmptyRunError("no traces to aggregate");

    std::set<std::string> problems;
    for (const auto& trace : traces) problems.insert(trace.problem_id);
    const bool prefix = problems.size() > 1;

    struct Tally {
        int zeros = 0;
        int graded = 0;
    };
    std::map<std::string, Tally> tallies;
    for (const auto& trace : traces) {
        for (const auto& [path, result] : trace.per_criterion) {
            const std::string key = prefix ? trace.problem_id + "/" + path : path;
            auto& tally = tallies[key];
            ++tally.graded;
            if (result.marks.is_zero()) ++tally.zeros;
        }
    }

    std::vector<MissedCriterion> out;
    out.reserve(tallies.size());
    for (const auto& [path, tally] : tallies) {
        MissedCriterion mc;
        mc.path = path;
        mc.zero_count = tally.zeros;
        mc.graded_count = tally.graded;
        mc.miss_rate = static_cast<double>(tally.zeros) / static_cast<double>(tally.graded);
        out.push_back(std::move(mc));
    }
    std::sort(out.begin(), out.end(), [](const MissedCriterion& a, const MissedCriterion& b) {
        if (a.miss_rate != b.miss_rate) return a.miss_rate > b.miss_rate;
        return a.path < b.path;
    });
    if (top_k >= 0 && static_cast<std::size_t>(top_k) < out.size())
        out.resize(static_cast<std::size_t>(top_k));
    return out;
}

std::vector<LowConfidenceEntry> low_confidence_traces(const std::vector<EvaluationTrace>& traces,
                                                      double threshold) {
    bool any_identification = false;
    std::vector<LowConfidenceEntry> out;
    for (const auto& trace : traces) {
        if (!trace.approach) continue;
        any_identification = true;
        if (trace.approach->confidence < threshold)
            out.push_back({trace.student_id, trace.approach->approach,
                           trace.approach->confidence});
    }
    if (!any_identification)
        throw NotAnEmeRunError("run carries no approach identifications");
    std::sort(out.begin(), out.end(), [](const LowConfidenceEntry& a, const LowConfidenceEntry& b) {
        return a.student_id < b.student_id;
    });
    return out;
}

}  // namespace gradekit
