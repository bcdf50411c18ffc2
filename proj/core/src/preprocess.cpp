#include "gradekit/preprocess.hpp"

#include <algorithm>
#include <numeric>

#include "gradekit/errors.hpp"

namespace gradekit {

ScoreVector::ScoreVector(std::vector<Rational> values, Rational scale_max, std::string label)
    : values_(std::move(values)), scale_max_(scale_max), label_(std::move(label)) {
    if (values_.empty()) throw DimensionMismatchError("score vector must hold at least one value");
    if (!(scale_max_ > Rational(0))) throw ZeroScaleError("score vector scale must be positive");
    for (const auto& v : values_) {
        if (v.is_negative() || v > scale_max_)
            throw DimensionMismatchError("score " + v.to_string() + " outside [0, " +
                                         scale_max_.to_string() + "] in '" + label_ + "'");
    }
}

std::vector<double> ScoreVector::as_doubles() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(v.to_double());
    return out;
}

MethodScoreMatrix::MethodScoreMatrix(std::vector<std::vector<Rational>> rows,
                                     Rational per_method_scale, std::vector<Rational> method_max)
    : rows_(std::move(rows)), per_method_scale_(per_method_scale), method_max_(std::move(method_max)) {
    if (!(per_method_scale_ > Rational(0)))
        throw ZeroScaleError("per-method scale must be positive");
    if (method_max_.empty()) throw DimensionMismatchError("method_max list is empty");
    for (const auto& row : rows_) {
        if (row.size() != method_max_.size())
            throw DimensionMismatchError("row width != number of methods");
        for (const auto& cell : row) {
            if (cell.is_negative() || cell > per_method_scale_)
                throw DimensionMismatchError("method score " + cell.to_string() +
                                             " outside [0, " + per_method_scale_.to_string() + "]");
        }
    }
}

BinnedVector::BinnedVector(std::vector<int> labels, int bin_count)
    : labels_(std::move(labels)), bin_count_(bin_count) {
    if (bin_count_ < 2) throw TooFewPointsError("bin count must be >= 2");
    for (int l : labels_) {
        if (l < 0 || l >= bin_count_)
            throw DimensionMismatchError("bin label out of [0, K)");
    }
}

ScoreVector scale_linear(const ScoreVector& e, const Rational& target_scale) {
    if (!(target_scale > Rational(0))) throw ZeroScaleError("target scale must be positive");
    const Rational factor = target_scale / e.scale_max();
    std::vector<Rational> out;
    out.reserve(e.size());
    for (const auto& v : e.values()) out.push_back(v * factor);
    return ScoreVector(std::move(out), target_scale, e.label());
}

ScoreVector scale_methodwise(const MethodScoreMatrix& e) {
    if (e.students() == 0) throw DimensionMismatchError("method matrix has no rows");
    Rational target(0);
    for (const auto& m : e.method_max()) target += m;
    if (!(target > Rational(0))) throw ZeroScaleError("sum of method maxima must be positive");

    std::vector<Rational> out;
    out.reserve(e.students());
    for (const auto& row : e.rows()) {
        Rational total(0);
        for (std::size_t m = 0; m < row.size(); ++m)
            total += row[m] * e.method_max()[m] / e.per_method_scale();
        out.push_back(total);
    }
    return ScoreVector(std::move(out), target, "methodwise");
}

BinnedVector bin_by_rank(const ScoreVector& v, int bins) {
    if (bins < 2) throw TooFewPointsError("bin count must be >= 2");
    const std::size_t n = v.size();
    if (n < static_cast<std::size_t>(bins))
        throw TooFewPointsError("need at least K points for K bins");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Stable: tied values keep their original positions, which is what places
    // equal scores into different bins at a cut.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return v[a] < v[b];
    });

    std::vector<int> labels(n, 0);
    for (std::size_t rank = 0; rank < n; ++rank)
        labels[order[rank]] = static_cast<int>(rank * static_cast<std::size_t>(bins) / n);
    return BinnedVector(std::move(labels), bins);
}

}  // namespace gradekit
