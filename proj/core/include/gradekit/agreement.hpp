#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gradekit/preprocess.hpp"

namespace gradekit {

/// The seven agreement statistics for one base/experiment pair. A statistic
/// that is undefined on the given data (zero variance, degenerate marginals)
/// is absent, with the reason recorded; it is never silently 0 or NaN.
struct AgreementReport {
    std::optional<double> pearson;
    std::optional<double> spearman;
    std::optional<double> kendall_tau_b;
    std::optional<double> leniency;
    std::optional<double> icc1;
    std::optional<double> icc2;
    std::optional<double> icc3;
    std::optional<double> kappa;
    int n = 0;
    int bins = 0;
    std::map<std::string, std::string> undefined_reasons;
};

enum class IccVariant {
    OneWayRandom,   // ICC(1,1)
    TwoWayRandom,   // ICC(2,1), absolute agreement
    TwoWayMixed,    // ICC(3,1), consistency
};

/// Product-moment correlation. Undefined when either vector is constant.
std::optional<double> pearson(const ScoreVector& b, const ScoreVector& e);

/// Pearson over average ranks (ties share the mean rank).
std::optional<double> spearman(const ScoreVector& b, const ScoreVector& e);

/// Tie-aware Kendall tau-b. Exact pair counting up to kKendallExactLimit
/// points, merge-sort counting above. Undefined when either vector is all
/// ties.
std::optional<double> kendall_tau_b(const ScoreVector& b, const ScoreVector& e);

inline constexpr std::size_t kKendallExactLimit = 2000;

/// Mean normalized signed error: mean(e/scale - b/scale). +1 is a perfectly
/// lenient grader, -1 a perfectly strict one. Both inputs must already be on
/// `scale`; computed exactly before conversion to double.
double leniency(const ScoreVector& b, const ScoreVector& e, const Rational& scale);

/// Single-measure Shrout-Fleiss estimator for two raters (base, experiment).
/// Undefined when between-subject variance vanishes.
std::optional<double> icc(const ScoreVector& b, const ScoreVector& e, IccVariant variant);

/// Chance-corrected categorical agreement over binned labels. Undefined when
/// expected agreement is 1 (both raters degenerate on one shared category).
std::optional<double> cohen_kappa(const BinnedVector& bb, const BinnedVector& be);

/// Pipeline: scale experiment to the base scale if needed, run the seven
/// statistics, bin both vectors, record n and K. Component domain failures
/// surface as undefined fields, not exceptions.
AgreementReport full_report(const ScoreVector& b, const ScoreVector& e_raw, int bins);

namespace detail {
// Average ranks with ties sharing the mean rank (1-based, like rank tables).
std::vector<double> average_ranks(const std::vector<Rational>& values);
// Both tau-b routes, exposed so each can be checked against the other.
double kendall_concordance_bruteforce(const std::vector<Rational>& x,
                                      const std::vector<Rational>& y);
double kendall_concordance_mergesort(const std::vector<Rational>& x,
                                     const std::vector<Rational>& y);
}  // namespace detail

}  // namespace gradekit
