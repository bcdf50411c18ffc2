#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gradekit/rational.hpp"

using gradekit::Rational;

TEST_CASE("construction normalizes sign and terms") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK_THROWS_AS(Rational(1, 0), gradekit::ZeroScaleError);
}

TEST_CASE("parsing decimals, fractions and exponents") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("-2.5") == Rational(-5, 2));
    CHECK(Rational::parse("7/2") == Rational(7, 2));
    CHECK(Rational::parse("0.1") == Rational(1, 10));
    CHECK(Rational::parse("1e2") == Rational(100));
    CHECK(Rational::parse("2.5e-1") == Rational(1, 4));
    CHECK(Rational::parse(" 35 ") == Rational(35));
    CHECK_FALSE(Rational::try_parse("abc").has_value());
    CHECK_FALSE(Rational::try_parse("1/0").has_value());
    CHECK_FALSE(Rational::try_parse("").has_value());
}

TEST_CASE("arithmetic stays exact") {
    const Rational third(1, 3);
    CHECK(third + third + third == Rational(1));
    CHECK(Rational(1, 10) + Rational(2, 10) == Rational(3, 10));
    CHECK(Rational(7, 2) * Rational(2, 7) == Rational(1));
    CHECK(Rational(5) / Rational(2) == Rational(5, 2));
    CHECK(Rational(1) - Rational(3, 2) == Rational(-1, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), gradekit::ZeroScaleError);
}

TEST_CASE("ordering via cross multiplication") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK(Rational(2, 6) <= Rational(1, 3));
    CHECK(Rational(7, 2) > Rational(3));
}

TEST_CASE("round half away from zero") {
    CHECK(Rational(7, 3).round_half_away_from_zero() == 2);
    CHECK(Rational(5, 2).round_half_away_from_zero() == 3);
    CHECK(Rational(3, 2).round_half_away_from_zero() == 2);
    CHECK(Rational(-5, 2).round_half_away_from_zero() == -3);
    CHECK(Rational(-7, 3).round_half_away_from_zero() == -2);
    CHECK(Rational(4).round_half_away_from_zero() == 4);
}

TEST_CASE("to_string round-trips through parse") {
    CHECK(Rational(5, 2).to_string() == "2.5");
    CHECK(Rational(-5, 2).to_string() == "-2.5");
    CHECK(Rational(1, 3).to_string() == "1/3");
    CHECK(Rational(35).to_string() == "35");
    CHECK(Rational(1, 10).to_string() == "0.1");

    std::mt19937_64 rng(42);
    for (int i = 0; i < 500; ++i) {
        const std::int64_t num = static_cast<std::int64_t>(rng() % 20001) - 10000;
        const std::int64_t den = static_cast<std::int64_t>(rng() % 999) + 1;
        const Rational r(num, den);
        CHECK(Rational::parse(r.to_string()) == r);
    }
}

TEST_CASE("sums are order independent") {
    std::mt19937_64 rng(7);
    std::vector<Rational> values;
    for (int i = 0; i < 64; ++i)
        values.emplace_back(static_cast<std::int64_t>(rng() % 41), static_cast<std::int64_t>(rng() % 7 + 1));
    Rational forward(0), backward(0);
    for (const auto& v : values) forward += v;
    for (auto it = values.rbegin(); it != values.rend(); ++it) backward += *it;
    CHECK(forward == backward);
}
