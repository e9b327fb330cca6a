#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <string_view>

namespace ppid {

using Rational = boost::multiprecision::cpp_rational;

/// A probability mass that is either an exact rational or a binary64 value.
///
/// Arithmetic between two exact values stays exact. As soon as one operand
/// is decimal the result is decimal.
class Probability {
public:
    Probability() = default;
    explicit Probability(Rational q) : exact_(true), q_(std::move(q)) {}
    explicit Probability(double d) : exact_(false), d_(d) {}

    static Probability zero() { return Probability(Rational(0)); }
    static Probability one() { return Probability(Rational(1)); }

    /// Parses "1/4", "3", "0.25" or "2.5e-1". Fraction and integer syntax is
    /// exact; anything with a decimal point or exponent is decimal.
    static Probability parse(std::string_view text);

    bool is_exact() const { return exact_; }
    const Rational& rational() const { return q_; }
    double to_double() const;

    bool is_zero() const;
    bool is_positive() const;

    Probability& operator+=(const Probability& other);
    friend Probability operator+(Probability a, const Probability& b) { return a += b; }
    friend Probability operator-(const Probability& a, const Probability& b);
    friend Probability operator*(const Probability& a, const Probability& b);
    friend Probability operator/(const Probability& a, const Probability& b);

    friend bool operator==(const Probability& a, const Probability& b);
    friend std::partial_ordering operator<=>(const Probability& a, const Probability& b);

    /// "1/4" for exact values, shortest round-trip decimal otherwise.
    std::string to_string() const;

private:
    bool exact_ = true;
    Rational q_{0};
    double d_ = 0.0;
};

}  // namespace ppid
