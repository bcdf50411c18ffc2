#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "gradekit/errors.hpp"

namespace gradekit {

class RationalOverflowError : public Error { public: using Error::Error; };
class RationalParseError : public Error { public: using Error::Error; };

/// Exact rational number on 64-bit terms. Marks are kept in this form from
/// ingest to output so totals are order-independent and drift-free; doubles
/// appear only at statistic boundaries.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)

    Rational(std::int64_t numerator, std::int64_t denominator) {
        if (denominator == 0) throw ZeroScaleError("rational with zero denominator");
        if (denominator < 0) {
            numerator = checked_negate(numerator);
            denominator = checked_negate(denominator);
        }
        const std::int64_t g = std::gcd(numerator < 0 ? -numerator : numerator, denominator);
        num_ = g ? numerator / g : 0;
        den_ = g ? denominator / g : 1;
    }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Nearest integer, halves rounded away from zero (2.5 -> 3, -2.5 -> -3).
    std::int64_t round_half_away_from_zero() const {
        const __int128 n = num_ < 0 ? -static_cast<__int128>(num_) : static_cast<__int128>(num_);
        const __int128 q = (2 * n + den_) / (2 * static_cast<__int128>(den_));
        return num_ < 0 ? static_cast<std::int64_t>(-q) : static_cast<std::int64_t>(q);
    }

    Rational abs() const { return num_ < 0 ? Rational(checked_negate(num_), den_) : *this; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const __int128 lhs = static_cast<__int128>(a.num_) * (b.den_ / g);
        const __int128 rhs = static_cast<__int128>(b.num_) * (a.den_ / g);
        const __int128 den = static_cast<__int128>(a.den_) / g * b.den_;
        return from_wide(lhs + rhs, den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator-(const Rational& a) {
        return Rational(checked_negate(a.num_), a.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        const std::int64_t g1 = std::gcd(a.num_ < 0 ? -a.num_ : a.num_, b.den_);
        const std::int64_t g2 = std::gcd(b.num_ < 0 ? -b.num_ : b.num_, a.den_);
        const __int128 num = static_cast<__int128>(a.num_ / (g1 ? g1 : 1)) * (b.num_ / (g2 ? g2 : 1));
        const __int128 den = static_cast<__int128>(a.den_ / (g2 ? g2 : 1)) * (b.den_ / (g1 ? g1 : 1));
        return from_wide(num, den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw ZeroScaleError("rational division by zero");
        return a * Rational(b.den_, b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// Accepts "5", "-3.25", "7/2" and scientific notation ("1e2", "2.5e-1").
    static Rational parse(std::string_view text) {
        auto r = try_parse(text);
        if (!r) throw RationalParseError("cannot parse rational from '" + std::string(text) + "'");
        return *r;
    }

    static std::optional<Rational> try_parse(std::string_view text);

    /// Terminating decimals render as decimals ("2.5"), everything else as
    /// "n/d". Both forms re-parse to the identical rational.
    std::string to_string() const;

private:
    static std::int64_t checked_negate(std::int64_t v) {
        if (v == std::numeric_limits<std::int64_t>::min())
            throw RationalOverflowError("rational negation overflow");
        return -v;
    }

    static Rational from_wide(__int128 num, __int128 den) {
        if (den < 0) { num = -num; den = -den; }
        const __int128 an = num < 0 ? -num : num;
        __int128 g = wide_gcd(an, den);
        if (g == 0) g = 1;
        num /= g;
        den /= g;
        constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
        constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
        if (num < lo || num > hi || den > hi)
            throw RationalOverflowError("rational exceeds 64-bit range");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    static __int128 wide_gcd(__int128 a, __int128 b) {
        while (b != 0) { const __int128 t = a % b; a = b; b = t; }
        return a;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline std::optional<Rational> Rational::try_parse(std::string_view text) {
    // Trim surrounding whitespace.
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto lhs = try_parse(text.substr(0, slash));
        auto rhs = try_parse(text.substr(slash + 1));
        if (!lhs || !rhs || rhs->is_zero()) return std::nullopt;
        return *lhs / *rhs;
    }

    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') { negative = text[i] == '-'; ++i; }

    __int128 digits = 0;
    int frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            if (digits > static_cast<__int128>(1) << 100) return std::nullopt;
            if (seen_dot) ++frac_digits;
            seen_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            break;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit) return std::nullopt;

    int exponent = 0;
    if (i < text.size()) {  // at 'e'/'E'
        ++i;
        bool exp_neg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) { exp_neg = text[i] == '-'; ++i; }
        if (i >= text.size()) return std::nullopt;
        for (; i < text.size(); ++i) {
            if (text[i] < '0' || text[i] > '9') return std::nullopt;
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 400) return std::nullopt;
        }
        if (exp_neg) exponent = -exponent;
    }

    __int128 num = negative ? -digits : digits;
    __int128 den = 1;
    int pow10 = exponent - frac_digits;
    while (pow10 > 0) {
        num *= 10;
        if (num > static_cast<__int128>(1) << 120 || num < -(static_cast<__int128>(1) << 120))
            return std::nullopt;
        --pow10;
    }
    while (pow10 < 0) {
        den *= 10;
        if (den > static_cast<__int128>(1) << 120) return std::nullopt;
        ++pow10;
    }
    try {
        return from_wide(num, den);
    } catch (const RationalOverflowError&) {
        return std::nullopt;
    }
}

inline std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    // Terminating decimal iff den = 2^a * 5^b.
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1 || twos > 18 || fives > 18)
        return std::to_string(num_) + "/" + std::to_string(den_);

    const int k = twos > fives ? twos : fives;
    __int128 scaled = num_ < 0 ? -static_cast<__int128>(num_) : static_cast<__int128>(num_);
    for (int j = 0; j < k; ++j) scaled *= 10;
    scaled /= den_;

    std::string digits;
    if (scaled == 0) digits = "0";
    while (scaled > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
        scaled /= 10;
    }
    while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
    digits.insert(digits.size() - k, ".");
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    return (num_ < 0 ? "-" : "") + digits;
}

}  // namespace gradekit
