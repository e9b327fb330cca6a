#include "ppid/probability.hpp"

#include "ppid/error.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace ppid {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

boost::multiprecision::cpp_int parse_int(std::string_view s) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    return boost::multiprecision::cpp_int(std::string(s));
}

}  // namespace

Probability Probability::parse(std::string_view text) {
    auto s = trim(text);
    if (s.empty()) throw Error("empty probability field");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = trim(s.substr(0, slash));
        auto den = trim(s.substr(slash + 1));
        if (!is_integer_literal(num) || !is_integer_literal(den)) {
            throw Error(fmt::format("malformed fraction '{}'", s));
        }
        auto d = parse_int(den);
        if (d == 0) throw Error(fmt::format("zero denominator in '{}'", s));
        return Probability(Rational(parse_int(num), d));
    }
    if (is_integer_literal(s)) return Probability(Rational(parse_int(s)));

    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(fmt::format("malformed probability '{}'", s));
    }
    return Probability(value);
}

double Probability::to_double() const {
    return exact_ ? static_cast<double>(q_) : d_;
}

bool Probability::is_zero() const { return exact_ ? q_ == 0 : d_ == 0.0; }

bool Probability::is_positive() const { return exact_ ? q_ > 0 : d_ > 0.0; }

Probability& Probability::operator+=(const Probability& other) {
    if (exact_ && other.exact_) {
        q_ += other.q_;
    } else {
        d_ = to_double() + other.to_double();
        exact_ = false;
        q_ = 0;
    }
    return *this;
}

Probability operator-(const Probability& a, const Probability& b) {
    if (a.exact_ && b.exact_) return Probability(Rational(a.q_ - b.q_));
    return Probability(a.to_double() - b.to_double());
}

Probability operator*(const Probability& a, const Probability& b) {
    if (a.exact_ && b.exact_) return Probability(Rational(a.q_ * b.q_));
    return Probability(a.to_double() * b.to_double());
}

Probability operator/(const Probability& a, const Probability& b) {
    if (b.is_zero()) throw std::domain_error("division by zero probability");
    if (a.exact_ && b.exact_) return Probability(Rational(a.q_ / b.q_));
    return Probability(a.to_double() / b.to_double());
}

bool operator==(const Probability& a, const Probability& b) {
    if (a.exact_ && b.exact_) return a.q_ == b.q_;
    return a.to_double() == b.to_double();
}

std::partial_ordering operator<=>(const Probability& a, const Probability& b) {
    if (a.exact_ && b.exact_) {
        if (a.q_ < b.q_) return std::partial_ordering::less;
        if (a.q_ > b.q_) return std::partial_ordering::greater;
        return std::partial_ordering::equivalent;
    }
    return a.to_double() <=> b.to_double();
}

std::string Probability::to_string() const {
    if (!exact_) return fmt::format("{}", d_);
    if (denominator(q_) == 1) return numerator(q_).str();
    return numerator(q_).str() + "/" + denominator(q_).str();
}

}  // namespace ppid
