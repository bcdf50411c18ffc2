#include "gradekit/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gradekit/errors.hpp"

namespace gradekit {

namespace {

bool all_equal(const std::vector<Rational>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] == v[0])) return false;
    return true;
}

void require_same_length(const ScoreVector& b, const ScoreVector& e) {
    if (b.size() != e.size())
        throw DimensionMismatchError("base and experiment vectors differ in length");
}

std::optional<double> pearson_doubles(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<long double>(n);
    my /= static_cast<long double>(n);
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0 || syy <= 0) return std::nullopt;
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Pairs tied within consecutive equal runs of a sorted sequence: sum t(t-1)/2.
long double tie_pair_count(std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    long double pairs = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= values.size(); ++i) {
        if (i < values.size() && values[i] == values[i - 1]) {
            ++run;
        } else {
            pairs += static_cast<long double>(run) * (run - 1) / 2.0L;
            run = 1;
        }
    }
    return pairs;
}

long long merge_count_inversions(std::vector<Rational>& v, std::vector<Rational>& scratch,
                                 std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    long long inversions = merge_count_inversions(v, scratch, lo, mid) +
                           merge_count_inversions(v, scratch, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            inversions += static_cast<long long>(mid - i);
            scratch[k++] = v[j++];
        } else {
            scratch[k++] = v[i++];
        }
    }
    while (i < mid) scratch[k++] = v[i++];
    while (j < hi) scratch[k++] = v[j++];
    std::copy(scratch.begin() + static_cast<long>(lo), scratch.begin() + static_cast<long>(hi),
              v.begin() + static_cast<long>(lo));
    return inversions;
}

}  // namespace

namespace detail {

std::vector<double> average_ranks(const std::vector<Rational>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // 1-based ranks i+1 .. j+1 share the mean rank.
        const double mean_rank = static_cast<double>(i + j + 2) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

double kendall_concordance_bruteforce(const std::vector<Rational>& x,
                                      const std::vector<Rational>& y) {
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const int sx = x[i] < x[j] ? 1 : (x[j] < x[i] ? -1 : 0);
            const int sy = y[i] < y[j] ? 1 : (y[j] < y[i] ? -1 : 0);
            const int s = sx * sy;
            if (s > 0) ++concordant;
            else if (s < 0) ++discordant;
        }
    }
    return static_cast<double>(concordant - discordant);
}

double kendall_concordance_mergesort(const std::vector<Rational>& x,
                                     const std::vector<Rational>& y) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] < x[b]) return true;
        if (x[b] < x[a]) return false;
        return y[a] < y[b];
    });

    long double xtie = 0, joint_tie = 0;
    std::size_t run_x = 1, run_xy = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        const bool same_x = i < n && x[order[i]] == x[order[i - 1]];
        const bool same_xy = same_x && y[order[i]] == y[order[i - 1]];
        if (same_x) ++run_x;
        else { xtie += static_cast<long double>(run_x) * (run_x - 1) / 2.0L; run_x = 1; }
        if (same_xy) ++run_xy;
        else { joint_tie += static_cast<long double>(run_xy) * (run_xy - 1) / 2.0L; run_xy = 1; }
    }

    std::vector<Rational> y_seq(n);
    for (std::size_t i = 0; i < n; ++i) y_seq[i] = y[order[i]];
    std::vector<Rational> scratch(n);
    const long long discordant_swaps = merge_count_inversions(y_seq, scratch, 0, n);

    const long double total = static_cast<long double>(n) * (n - 1) / 2.0L;
    const long double ytie = tie_pair_count(y);
    const long double conc_minus_disc =
        total - xtie - ytie + joint_tie - 2.0L * static_cast<long double>(discordant_swaps);
    return static_cast<double>(conc_minus_disc);
}

}  // namespace detail

std::optional<double> pearson(const ScoreVector& b, const ScoreVector& e) {
    require_same_length(b, e);
    if (b.size() < 2) throw TooFewPointsError("pearson needs at least 2 points");
    if (all_equal(b.values()) || all_equal(e.values())) return std::nullopt;
    return pearson_doubles(b.as_doubles(), e.as_doubles());
}

std::optional<double> spearman(const ScoreVector& b, const ScoreVector& e) {
    require_same_length(b, e);
    if (b.size() < 2) throw TooFewPointsError("spearman needs at least 2 points");
    if (all_equal(b.values()) || all_equal(e.values())) return std::nullopt;
    return pearson_doubles(detail::average_ranks(b.values()), detail::average_ranks(e.values()));
}

std::optional<double> kendall_tau_b(const ScoreVector& b, const ScoreVector& e) {
    require_same_length(b, e);
    const std::size_t n = b.size();
    if (n < 2) throw TooFewPointsError("kendall tau-b needs at least 2 points");
    if (all_equal(b.values()) || all_equal(e.values())) return std::nullopt;

    const long double total = static_cast<long double>(n) * (n - 1) / 2.0L;
    const long double tie_b = tie_pair_count(b.values());
    const long double tie_e = tie_pair_count(e.values());
    const double conc_minus_disc =
        n <= kKendallExactLimit
            ? detail::kendall_concordance_bruteforce(b.values(), e.values())
            : detail::kendall_concordance_mergesort(b.values(), e.values());
    const long double denominator = std::sqrt((total - tie_b) * (total - tie_e));
    if (!(denominator > 0)) return std::nullopt;
    return static_cast<double>(conc_minus_disc / denominator);
}

double leniency(const ScoreVector& b, const ScoreVector& e, const Rational& scale) {
    require_same_length(b, e);
    if (!(b.scale_max() == scale) || !(e.scale_max() == scale))
        throw ScaleMismatchError("leniency expects both vectors on scale " + scale.to_string() +
                                 " (got " + b.scale_max().to_string() + " and " +
                                 e.scale_max().to_string() + ")");
    Rational sum(0);
    for (std::size_t i = 0; i < b.size(); ++i) sum += e[i] - b[i];
    const Rational mean = sum / (scale * Rational(static_cast<std::int64_t>(b.size())));
    return mean.to_double();
}

std::optional<double> icc(const ScoreVector& b, const ScoreVector& e, IccVariant variant) {
    require_same_length(b, e);
    const std::size_t n = b.size();
    if (n < 3) throw TooFewPointsError("icc needs at least 3 subjects");

    // Between-subject variance vanishes exactly when b[i] + e[i] is constant.
    std::vector<Rational> row_sums(n);
    for (std::size_t i = 0; i < n; ++i) row_sums[i] = b[i] + e[i];
    if (all_equal(row_sums)) return std::nullopt;

    constexpr double k = 2.0;
    const auto xb = b.as_doubles();
    const auto xe = e.as_doubles();
    long double grand = 0;
    for (std::size_t i = 0; i < n; ++i) grand += xb[i] + xe[i];
    grand /= static_cast<long double>(2 * n);

    long double mean_b = 0, mean_e = 0;
    for (std::size_t i = 0; i < n; ++i) { mean_b += xb[i]; mean_e += xe[i]; }
    mean_b /= static_cast<long double>(n);
    mean_e /= static_cast<long double>(n);

    long double ss_total = 0, ss_rows = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double row_mean = (static_cast<long double>(xb[i]) + xe[i]) / 2.0L;
        ss_rows += (row_mean - grand) * (row_mean - grand);
        ss_total += (xb[i] - grand) * (xb[i] - grand) + (xe[i] - grand) * (xe[i] - grand);
    }
    ss_rows *= k;
    const long double ss_cols = static_cast<long double>(n) *
                                ((mean_b - grand) * (mean_b - grand) +
                                 (mean_e - grand) * (mean_e - grand));
    long double ss_error = ss_total - ss_rows - ss_cols;
    if (ss_error < 0) ss_error = 0;  // guard fp cancellation
    long double ss_within = ss_total - ss_rows;
    if (ss_within < 0) ss_within = 0;

    const long double ms_r = ss_rows / static_cast<long double>(n - 1);
    const long double ms_c = ss_cols;                                        // k-1 == 1
    const long double ms_e = ss_error / static_cast<long double>(n - 1);     // (n-1)(k-1)
    const long double ms_w = ss_within / static_cast<long double>(n);        // n(k-1)

    long double numerator = 0, denominator = 0;
    switch (variant) {
        case IccVariant::OneWayRandom:
            numerator = ms_r - ms_w;
            denominator = ms_r + (k - 1) * ms_w;
            break;
        case IccVariant::TwoWayRandom:
            numerator = ms_r - ms_e;
            denominator = ms_r + (k - 1) * ms_e + k * (ms_c - ms_e) / static_cast<long double>(n);
            break;
        case IccVariant::TwoWayMixed:
            numerator = ms_r - ms_e;
            denominator = ms_r + (k - 1) * ms_e;
            break;
    }
    if (!(std::fabs(static_cast<double>(denominator)) > 0)) return std::nullopt;
    return static_cast<double>(numerator / denominator);
}

std::optional<double> cohen_kappa(const BinnedVector& bb, const BinnedVector& be) {
    if (bb.size() != be.size())
        throw DimensionMismatchError("binned vectors differ in length");
    if (bb.bin_count() != be.bin_count())
        throw DimensionMismatchError("binned vectors disagree on K");
    const std::size_t n = bb.size();
    if (n == 0) throw TooFewPointsError("kappa needs at least one label");

    const int k = bb.bin_count();
    std::vector<long long> count_b(static_cast<std::size_t>(k), 0);
    std::vector<long long> count_e(static_cast<std::size_t>(k), 0);
    long long observed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ++count_b[static_cast<std::size_t>(bb.labels()[i])];
        ++count_e[static_cast<std::size_t>(be.labels()[i])];
        if (bb.labels()[i] == be.labels()[i]) ++observed;
    }
    long long expected_scaled = 0;  // sum of count_b[k]*count_e[k]; p_e = this / n^2
    for (int c = 0; c < k; ++c)
        expected_scaled += count_b[static_cast<std::size_t>(c)] * count_e[static_cast<std::size_t>(c)];

    const long long n2 = static_cast<long long>(n) * static_cast<long long>(n);
    if (expected_scaled == n2) return std::nullopt;  // degenerate marginals
    const double p_o = static_cast<double>(observed) / static_cast<double>(n);
    const double p_e = static_cast<double>(expected_scaled) / static_cast<double>(n2);
    return (p_o - p_e) / (1.0 - p_e);
}

AgreementReport full_report(const ScoreVector& b, const ScoreVector& e_raw, int bins) {
    require_same_length(b, e_raw);
    AgreementReport report;
    report.n = static_cast<int>(b.size());
    report.bins = bins;

    const ScoreVector e_s =
        e_raw.scale_max() == b.scale_max() ? e_raw : scale_linear(e_raw, b.scale_max());

    const bool b_constant = all_equal(b.values());
    const bool e_constant = all_equal(e_s.values());
    const char* constant_side = b_constant ? "base vector is constant" : "experiment vector is constant";

    if (b_constant || e_constant) {
        report.undefined_reasons["pearson"] = constant_side;
        report.undefined_reasons["spearman"] = constant_side;
        report.undefined_reasons["kendall_tau_b"] = constant_side;
    } else {
        report.pearson = pearson(b, e_s);
        report.spearman = spearman(b, e_s);
        report.kendall_tau_b = kendall_tau_b(b, e_s);
    }

    report.leniency = leniency(b, e_s, b.scale_max());

    try {
        report.icc1 = icc(b, e_s, IccVariant::OneWayRandom);
        report.icc2 = icc(b, e_s, IccVariant::TwoWayRandom);
        report.icc3 = icc(b, e_s, IccVariant::TwoWayMixed);
        if (!report.icc1) report.undefined_reasons["icc1"] = "zero between-subject variance";
        if (!report.icc2) report.undefined_reasons["icc2"] = "zero between-subject variance";
        if (!report.icc3) report.undefined_reasons["icc3"] = "zero between-subject variance";
    } catch (const TooFewPointsError& err) {
        report.undefined_reasons["icc1"] = err.what();
        report.undefined_reasons["icc2"] = err.what();
        report.undefined_reasons["icc3"] = err.what();
    }

    try {
        const BinnedVector binned_b = bin_by_rank(b, bins);
        const BinnedVector binned_e = bin_by_rank(e_s, bins);
        report.kappa = cohen_kappa(binned_b, binned_e);
        if (!report.kappa) report.undefined_reasons["kappa"] = "degenerate marginals";
    } catch (const TooFewPointsError& err) {
        report.undefined_reasons["kappa"] = err.what();
    }
    return report;
}

}  // namespace gradekit
