#pragma once

#include <string>
#include <vector>

#include "gradekit/rational.hpp"

namespace gradekit {

/// Per-student scalar scores together with the scale they live on.
class ScoreVector {
public:
    ScoreVector(std::vector<Rational> values, Rational scale_max, std::string label);

    const std::vector<Rational>& values() const { return values_; }
    const Rational& scale_max() const { return scale_max_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return values_.size(); }
    const Rational& operator[](std::size_t i) const { return values_[i]; }

    std::vector<double> as_doubles() const;

private:
    std::vector<Rational> values_;
    Rational scale_max_;
    std::string label_;
};

/// N students x M methods, each cell graded on the same holistic scale.
class MethodScoreMatrix {
public:
    MethodScoreMatrix(std::vector<std::vector<Rational>> rows, Rational per_method_scale,
                      std::vector<Rational> method_max);

    const std::vector<std::vector<Rational>>& rows() const { return rows_; }
    const Rational& per_method_scale() const { return per_method_scale_; }
    const std::vector<Rational>& method_max() const { return method_max_; }
    std::size_t students() const { return rows_.size(); }
    std::size_t methods() const { return method_max_.size(); }

private:
    std::vector<std::vector<Rational>> rows_;
    Rational per_method_scale_;
    std::vector<Rational> method_max_;
};

/// Ordinal labels in [0, bin_count).
class BinnedVector {
public:
    BinnedVector(std::vector<int> labels, int bin_count);

    const std::vector<int>& labels() const { return labels_; }
    int bin_count() const { return bin_count_; }
    std::size_t size() const { return labels_.size(); }

private:
    std::vector<int> labels_;
    int bin_count_;
};

/// out[i] = e[i] * target / e.scale_max, exactly.
ScoreVector scale_linear(const ScoreVector& e, const Rational& target_scale);

/// Collapses method-level grades to one scalar per student:
/// out[i] = sum_m rows[i][m] * method_max[m] / per_method_scale, on the scale
/// sum_m method_max[m].
ScoreVector scale_methodwise(const MethodScoreMatrix& e);

/// Rank-based discretization: stable-sort by value (ties keep input order),
/// sorted rank r maps to floor(r * bins / N). With bins=5 this cuts at the
/// 20/40/60/80th percentiles.
BinnedVector bin_by_rank(const ScoreVector& v, int bins);

inline constexpr int kDefaultBins = 5;

}  // namespace gradekit
