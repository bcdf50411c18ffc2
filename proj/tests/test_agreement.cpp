#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gradekit/agreement.hpp"
#include "gradekit/errors.hpp"
#include "oracles.hpp"

using namespace gradekit;

namespace {

ScoreVector sv(std::vector<Rational> values, Rational scale = Rational(100)) {
    return ScoreVector(std::move(values), scale, "test");
}

ScoreVector from_ints(std::initializer_list<int> values, int scale = 100) {
    std::vector<Rational> out;
    for (int v : values) out.emplace_back(v);
    return sv(std::move(out), Rational(scale));
}

struct RandomPair {
    ScoreVector b;
    ScoreVector e;
};

// Quarter-step scores on [0, 35]; tie_heavy collapses to few distinct values.
RandomPair random_pair(std::mt19937_64& rng, std::size_t n, bool tie_heavy) {
    std::vector<Rational> b, e;
    for (std::size_t i = 0; i < n; ++i) {
        if (tie_heavy) {
            b.emplace_back(static_cast<std::int64_t>(rng() % 4) * 10);
            e.emplace_back(static_cast<std::int64_t>(rng() % 3) * 15);
        } else {
            b.emplace_back(static_cast<std::int64_t>(rng() % 141), 4);
            e.emplace_back(static_cast<std::int64_t>(rng() % 141), 4);
        }
    }
    return {sv(std::move(b), Rational(35)), sv(std::move(e), Rational(35))};
}

}  // namespace

TEST_CASE("pearson golden cases") {
    CHECK(*pearson(from_ints({1, 2, 3, 4}), from_ints({1, 2, 3, 4})) == doctest::Approx(1.0));
    CHECK(*pearson(from_ints({1, 2, 3, 4}), from_ints({99, 98, 97, 96})) == doctest::Approx(-1.0));
    CHECK(*pearson(from_ints({1, 2, 3, 4}), from_ints({1, 3, 2, 4})) == doctest::Approx(0.8));
}

TEST_CASE("pearson undefined on constant vectors, never NaN") {
    CHECK_FALSE(pearson(from_ints({5, 5, 5}), from_ints({1, 2, 3})).has_value());
    CHECK_FALSE(pearson(from_ints({1, 2, 3}), from_ints({7, 7, 7})).has_value());
    CHECK_THROWS_AS(pearson(from_ints({1}), from_ints({2})), TooFewPointsError);
    CHECK_THROWS_AS(pearson(from_ints({1, 2}), from_ints({1, 2, 3})), DimensionMismatchError);
}

TEST_CASE("spearman is 1 under strictly increasing transforms") {
    const auto b = from_ints({1, 5, 3, 9, 7});
    const auto e = from_ints({2, 26, 10, 82, 50});  // x^2 + 1
    CHECK(*spearman(b, e) == doctest::Approx(1.0));
    CHECK(*spearman(from_ints({1, 2, 3}), from_ints({9, 8, 7})) == doctest::Approx(-1.0));
}

TEST_CASE("spearman tied case matches the rank-then-pearson oracle") {
    const auto b = from_ints({1, 1, 2});
    const auto e = from_ints({1, 2, 2});
    const auto expected = oracles::spearman({1, 1, 2}, {1, 2, 2});
    REQUIRE(expected.has_value());
    CHECK(*spearman(b, e) == doctest::Approx(*expected).epsilon(1e-12));
    CHECK(*expected == doctest::Approx(0.5));
}

TEST_CASE("kendall golden cases and oracle") {
    CHECK(*kendall_tau_b(from_ints({1, 2, 3, 4}), from_ints({1, 2, 3, 4})) == doctest::Approx(1.0));
    CHECK(*kendall_tau_b(from_ints({1, 2, 3, 4}), from_ints({4, 3, 2, 1})) == doctest::Approx(-1.0));
    const auto expected = oracles::kendall_tau_b({1, 2, 3, 4}, {1, 3, 2, 4});
    CHECK(*kendall_tau_b(from_ints({1, 2, 3, 4}), from_ints({1, 3, 2, 4})) ==
          doctest::Approx(*expected).epsilon(1e-12));
}

TEST_CASE("kendall undefined when one side is all ties") {
    CHECK_FALSE(kendall_tau_b(from_ints({3, 3, 3}), from_ints({1, 2, 3})).has_value());
}

TEST_CASE("kendall merge-sort route agrees with pair enumeration") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        const auto [b, e] = random_pair(rng, 50 + rng() % 100, trial % 2 == 0);
        const double brute = detail::kendall_concordance_bruteforce(b.values(), e.values());
        const double merged = detail::kendall_concordance_mergesort(b.values(), e.values());
        CHECK(brute == doctest::Approx(merged).epsilon(1e-12));
    }
}

TEST_CASE("leniency bounds and zero point") {
    const Rational scale(35);
    std::vector<Rational> zeros(8, Rational(0)), full(8, Rational(35));
    CHECK(leniency(sv(zeros, scale), sv(full, scale), scale) == doctest::Approx(1.0));
    CHECK(leniency(sv(full, scale), sv(zeros, scale), scale) == doctest::Approx(-1.0));
    const auto b = sv({Rational(10), Rational(20), Rational(30)}, scale);
    CHECK(leniency(b, b, scale) == doctest::Approx(0.0));
}

TEST_CASE("leniency is antisymmetric and shifts linearly") {
    std::mt19937_64 rng(7);
    const auto [b, e] = random_pair(rng, 20, false);
    const double forward = leniency(b, e, Rational(35));
    const double backward = leniency(e, b, Rational(35));
    CHECK(forward == doctest::Approx(-backward).epsilon(1e-12));

    // e + delta*R stays in range for small delta here
    std::vector<Rational> shifted;
    const Rational delta(1, 100);
    bool in_range = true;
    for (const auto& v : e.values()) {
        const Rational s = v + delta * Rational(35);
        if (s > Rational(35)) { in_range = false; break; }
        shifted.push_back(s);
    }
    if (in_range) {
        const double after = leniency(b, sv(shifted, Rational(35)), Rational(35));
        CHECK(after == doctest::Approx(forward + delta.to_double()).epsilon(1e-9));
    }
}

TEST_CASE("leniency requires matching scales") {
    CHECK_THROWS_AS(leniency(from_ints({1, 2}, 35), from_ints({1, 2}, 100), Rational(35)),
                    ScaleMismatchError);
}

TEST_CASE("icc equals 1 when experiment equals base with variance") {
    const auto b = from_ints({3, 7, 11, 20, 28});
    CHECK(*icc(b, b, IccVariant::OneWayRandom) == doctest::Approx(1.0));
    CHECK(*icc(b, b, IccVariant::TwoWayRandom) == doctest::Approx(1.0));
    CHECK(*icc(b, b, IccVariant::TwoWayMixed) == doctest::Approx(1.0));
}

TEST_CASE("constant offset: ICC3 stays 1, ICC2 drops below 1") {
    const auto b = from_ints({3, 7, 11, 20, 28});
    const auto e = from_ints({8, 12, 16, 25, 33});
    CHECK(*icc(b, e, IccVariant::TwoWayMixed) == doctest::Approx(1.0));
    CHECK(*icc(b, e, IccVariant::TwoWayRandom) < 1.0);
}

TEST_CASE("icc undefined when between-subject variance vanishes") {
    // b + e constant per subject -> row means identical.
    const auto b = from_ints({1, 2, 3});
    const auto e = from_ints({9, 8, 7});
    CHECK_FALSE(icc(b, e, IccVariant::OneWayRandom).has_value());
    CHECK_THROWS_AS(icc(from_ints({1, 2}), from_ints({1, 2}), IccVariant::OneWayRandom),
                    TooFewPointsError);
}

TEST_CASE("icc golden case: experiment doubles the base") {
    // b=[1,2,3,4], e=2b. Hand ANOVA: MS_R=7.5, MS_C=12.5, MS_E=5/6... -> ICC1=1/3,
    // ICC2=0.470588..., ICC3=0.8. Consistency is high, absolute agreement poor.
    const auto b = from_ints({1, 2, 3, 4}, 10);
    const auto e = from_ints({2, 4, 6, 8}, 10);
    CHECK(*icc(b, e, IccVariant::OneWayRandom) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(*icc(b, e, IccVariant::TwoWayRandom) == doctest::Approx(8.0 / 17.0).epsilon(1e-12));
    CHECK(*icc(b, e, IccVariant::TwoWayMixed) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("kendall golden value: one swapped middle pair gives 2/3") {
    CHECK(*kendall_tau_b(from_ints({1, 2, 3, 4}), from_ints({1, 3, 2, 4})) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("leniency golden value: uniform +5 on a 35 scale is 1/7") {
    const Rational scale(35);
    const auto b = sv({Rational(10), Rational(20), Rational(30)}, scale);
    const auto e = sv({Rational(15), Rational(25), Rational(35)}, scale);
    CHECK(leniency(b, e, scale) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("icc matches the naive ANOVA oracle on a random N=10 pair") {
    std::mt19937_64 rng(55);
    const auto [b, e] = random_pair(rng, 10, false);
    const auto expected = oracles::icc_all(b.as_doubles(), e.as_doubles());
    REQUIRE(expected.icc1.has_value());
    CHECK(*icc(b, e, IccVariant::OneWayRandom) == doctest::Approx(*expected.icc1).epsilon(1e-9));
    CHECK(*icc(b, e, IccVariant::TwoWayRandom) == doctest::Approx(*expected.icc2).epsilon(1e-9));
    CHECK(*icc(b, e, IccVariant::TwoWayMixed) == doctest::Approx(*expected.icc3).epsilon(1e-9));
}

TEST_CASE("cohen kappa golden cases") {
    const BinnedVector a({0, 0, 1, 1}, 2);
    const BinnedVector b({0, 1, 1, 1}, 2);
    CHECK(*cohen_kappa(a, a) == doctest::Approx(1.0));
    CHECK(*cohen_kappa(a, b) == doctest::Approx(0.5));
}

TEST_CASE("cohen kappa undefined on degenerate marginals") {
    const BinnedVector all_zero({0, 0, 0}, 2);
    CHECK_FALSE(cohen_kappa(all_zero, all_zero).has_value());
    CHECK_THROWS_AS(cohen_kappa(BinnedVector({0, 1}, 2), BinnedVector({0, 1, 0}, 2)),
                    DimensionMismatchError);
    CHECK_THROWS_AS(cohen_kappa(BinnedVector({0, 1}, 2), BinnedVector({0, 1}, 3)),
                    DimensionMismatchError);
}

TEST_CASE("kappa can go negative and tends to zero for independent labels") {
    const BinnedVector a({0, 0, 1, 1}, 2);
    const BinnedVector b({1, 1, 0, 0}, 2);
    CHECK(*cohen_kappa(a, b) < 0);

    std::mt19937_64 rng(4242);
    std::vector<int> x(10000), y(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = static_cast<int>(rng() % 5);
        y[i] = static_cast<int>(rng() % 5);
    }
    const auto kappa = cohen_kappa(BinnedVector(x, 5), BinnedVector(y, 5));
    REQUIRE(kappa.has_value());
    CHECK(std::fabs(*kappa) < 0.05);
    const auto expected = oracles::cohen_kappa(x, y, 5);
    CHECK(*kappa == doctest::Approx(*expected).epsilon(1e-12));
}

TEST_CASE("sweep: all statistics match their oracles within 1e-9") {
    std::mt19937_64 rng(321);
    int checked = 0;
    for (int trial = 0; trial < 220; ++trial) {
        const std::size_t n = 5 + rng() % 46;
        const auto [b, e] = random_pair(rng, n, trial % 3 == 0);
        const auto xb = b.as_doubles();
        const auto xe = e.as_doubles();

        const auto p = pearson(b, e);
        const auto p_oracle = oracles::pearson(xb, xe);
        REQUIRE(p.has_value() == p_oracle.has_value());
        if (p) CHECK(*p == doctest::Approx(*p_oracle).epsilon(1e-9));

        const auto s = spearman(b, e);
        const auto s_oracle = oracles::spearman(xb, xe);
        if (s) CHECK(*s == doctest::Approx(*s_oracle).epsilon(1e-9));

        const auto t = kendall_tau_b(b, e);
        const auto t_oracle = oracles::kendall_tau_b(xb, xe);
        REQUIRE(t.has_value() == t_oracle.has_value());
        if (t) CHECK(*t == doctest::Approx(*t_oracle).epsilon(1e-9));

        if (n >= 5) {
            const auto binned_b = bin_by_rank(b, 5);
            const auto binned_e = bin_by_rank(e, 5);
            const auto kappa = cohen_kappa(binned_b, binned_e);
            const auto kappa_oracle =
                oracles::cohen_kappa(binned_b.labels(), binned_e.labels(), 5);
            REQUIRE(kappa.has_value() == kappa_oracle.has_value());
            if (kappa) CHECK(*kappa == doctest::Approx(*kappa_oracle).epsilon(1e-9));
        }

        const auto anova = oracles::icc_all(xb, xe);
        const auto icc1 = icc(b, e, IccVariant::OneWayRandom);
        if (icc1 && anova.icc1) {
            CHECK(*icc1 == doctest::Approx(*anova.icc1).epsilon(1e-7));
            CHECK(*icc(b, e, IccVariant::TwoWayRandom) == doctest::Approx(*anova.icc2).epsilon(1e-7));
            CHECK(*icc(b, e, IccVariant::TwoWayMixed) == doctest::Approx(*anova.icc3).epsilon(1e-7));
        }
        ++checked;
    }
    CHECK(checked >= 200);
}

TEST_CASE("correlations are symmetric; sign flips under negative scaling") {
    std::mt19937_64 rng(11);
    const auto [b, e] = random_pair(rng, 25, false);
    CHECK(*pearson(b, e) == doctest::Approx(*pearson(e, b)).epsilon(1e-12));
    CHECK(*spearman(b, e) == doctest::Approx(*spearman(e, b)).epsilon(1e-12));
    CHECK(*kendall_tau_b(b, e) == doctest::Approx(*kendall_tau_b(e, b)).epsilon(1e-12));

    // alpha*e + beta with alpha < 0 flips pearson's sign.
    std::vector<Rational> flipped;
    for (const auto& v : e.values()) flipped.push_back(Rational(35) - v);
    const auto e_flipped = sv(flipped, Rational(35));
    CHECK(*pearson(b, e_flipped) == doctest::Approx(-*pearson(b, e)).epsilon(1e-9));
    CHECK(*spearman(b, e_flipped) == doctest::Approx(-*spearman(b, e)).epsilon(1e-9));
    CHECK(*kendall_tau_b(b, e_flipped) == doctest::Approx(-*kendall_tau_b(b, e)).epsilon(1e-9));
}

TEST_CASE("full_report: identical vectors give ones across the board") {
    const auto b = from_ints({3, 7, 11, 20, 28, 1, 14, 33}, 35);
    const AgreementReport report = full_report(b, b, 5);
    CHECK(*report.pearson == doctest::Approx(1.0));
    CHECK(*report.spearman == doctest::Approx(1.0));
    CHECK(*report.kendall_tau_b == doctest::Approx(1.0));
    CHECK(*report.leniency == doctest::Approx(0.0));
    CHECK(*report.icc1 == doctest::Approx(1.0));
    CHECK(*report.icc2 == doctest::Approx(1.0));
    CHECK(*report.icc3 == doctest::Approx(1.0));
    CHECK(*report.kappa == doctest::Approx(1.0));
    CHECK(report.n == 8);
    CHECK(report.bins == 5);
}

TEST_CASE("full_report: constant experiment leaves correlations undefined but leniency defined") {
    const auto b = from_ints({3, 7, 11, 20, 28}, 35);
    const auto e = from_ints({10, 10, 10, 10, 10}, 35);
    const AgreementReport report = full_report(b, e, 5);
    CHECK_FALSE(report.pearson.has_value());
    CHECK_FALSE(report.spearman.has_value());
    CHECK_FALSE(report.kendall_tau_b.has_value());
    CHECK(report.leniency.has_value());
    CHECK(report.undefined_reasons.count("pearson") == 1);
}

TEST_CASE("full_report scales the experiment then matches component calls") {
    std::mt19937_64 rng(500);
    std::vector<Rational> raw;
    for (int i = 0; i < 12; ++i) raw.emplace_back(static_cast<std::int64_t>(rng() % 5));
    const auto e_raw = sv(raw, Rational(4));
    const auto [b, unused] = random_pair(rng, 12, false);

    const AgreementReport report = full_report(b, e_raw, 5);
    const ScoreVector e_scaled = scale_linear(e_raw, Rational(35));
    CHECK(*report.pearson == doctest::Approx(*pearson(b, e_scaled)).epsilon(1e-12));
    CHECK(*report.spearman == doctest::Approx(*spearman(b, e_scaled)).epsilon(1e-12));
    CHECK(*report.kendall_tau_b ==
          doctest::Approx(*kendall_tau_b(b, e_scaled)).epsilon(1e-12));
    CHECK(*report.leniency ==
          doctest::Approx(leniency(b, e_scaled, Rational(35))).epsilon(1e-12));
    CHECK(*report.icc1 == doctest::Approx(*icc(b, e_scaled, IccVariant::OneWayRandom)).epsilon(1e-12));
    CHECK(*report.icc2 == doctest::Approx(*icc(b, e_scaled, IccVariant::TwoWayRandom)).epsilon(1e-12));
    CHECK(*report.icc3 == doctest::Approx(*icc(b, e_scaled, IccVariant::TwoWayMixed)).epsilon(1e-12));
    CHECK(*report.kappa ==
          doctest::Approx(*cohen_kappa(bin_by_rank(b, 5), bin_by_rank(e_scaled, 5))).epsilon(1e-12));
}
