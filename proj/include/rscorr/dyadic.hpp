#pragma once

// Exact arithmetic for the value space of balanced correlations: dyadic
// rationals p/2^k, plus general rationals for averaging and linear solving.

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rscorr {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact value numerator / 2^exponent, always stored normalized: the
/// numerator is odd, or it is zero and the exponent is zero.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(int value) : num_(value) {}  // NOLINT(google-explicit-constructor)
    Dyadic(long value) : num_(value) {}  // NOLINT(google-explicit-constructor)
    Dyadic(long long value) : num_(value) {}  // NOLINT(google-explicit-constructor)
    explicit Dyadic(BigInt value) : num_(std::move(value)) {}

    /// Unique normalized representative of p / 2^k.
    static Dyadic normalize(BigInt p, std::int64_t k) {
        if (k < 0) throw std::invalid_argument("dyadic exponent must be non-negative");
        Dyadic d;
        d.num_ = std::move(p);
        d.exp_ = k;
        d.reduce();
        return d;
    }

    const BigInt& numerator() const noexcept { return num_; }
    std::int64_t exponent() const noexcept { return exp_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    int sign() const noexcept { return num_.sign(); }

    Dyadic operator-() const {
        Dyadic d = *this;
        d.num_ = -d.num_;
        return d;
    }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        Dyadic d;
        if (a.exp_ >= b.exp_) {
            d.num_ = a.num_ + (b.num_ << static_cast<unsigned>(a.exp_ - b.exp_));
            d.exp_ = a.exp_;
        } else {
            d.num_ = (a.num_ << static_cast<unsigned>(b.exp_ - a.exp_)) + b.num_;
            d.exp_ = b.exp_;
        }
        d.reduce();
        return d;
    }
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        if (a.is_zero() || b.is_zero()) return Dyadic{};
        Dyadic d;
        d.num_ = a.num_ * b.num_;
        d.exp_ = a.exp_ + b.exp_;
        d.reduce();
        return d;
    }

    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
    Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

    /// Divides by 2^k.
    Dyadic halved(std::int64_t k = 1) const {
        if (is_zero()) return *this;
        if (k < 0) throw std::invalid_argument("halving exponent must be non-negative");
        Dyadic d = *this;
        d.exp_ += k;
        d.reduce();
        return d;
    }

    Dyadic abs() const {
        Dyadic d = *this;
        if (d.num_.sign() < 0) d.num_ = -d.num_;
        return d;
    }

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exp_ == b.exp_ && a.num_ == b.num_;
    }

    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        const std::int64_t e = std::max(a.exp_, b.exp_);
        const BigInt lhs = a.num_ << static_cast<unsigned>(e - a.exp_);
        const BigInt rhs = b.num_ << static_cast<unsigned>(e - b.exp_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    double to_double() const {
        return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_));
    }

    Rational to_rational() const {
        return Rational(num_, BigInt(1) << static_cast<unsigned>(exp_));
    }

    /// "p/q" with q = 2^k written out, a bare integer when k = 0.
    std::string to_string() const {
        std::string s = num_.str();
        if (exp_ > 0) s += "/" + (BigInt(1) << static_cast<unsigned>(exp_)).str();
        return s;
    }

    /// "p/2^k" form, handy when k is large.
    std::string to_power_string() const {
        std::string s = num_.str();
        if (exp_ > 0) s += "/2^" + std::to_string(exp_);
        return s;
    }

private:
    void reduce() {
        if (num_.is_zero()) {
            exp_ = 0;
            return;
        }
        if (exp_ == 0) return;
        const auto tz = static_cast<std::int64_t>(boost::multiprecision::lsb(boost::multiprecision::abs(num_)));
        const std::int64_t shift = std::min(tz, exp_);
        if (shift > 0) {
            num_ >>= static_cast<unsigned>(shift);
            exp_ -= shift;
        }
    }

    BigInt num_{0};
    std::int64_t exp_{0};
};

inline Dyadic dyadic_normalize(BigInt p, std::int64_t k) { return Dyadic::normalize(std::move(p), k); }
inline Dyadic dyadic_add(const Dyadic& a, const Dyadic& b) { return a + b; }
inline Dyadic dyadic_mul(const Dyadic& a, const Dyadic& b) { return a * b; }

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.to_string(); }

namespace detail {

inline BigInt parse_bigint(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("malformed integer literal");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("malformed integer literal: " + std::string(s));
    std::string_view digits = s.substr(i);
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);  // a leading 0 reads as octal
    BigInt v{std::string(digits)};
    return s[0] == '-' ? BigInt(-v) : v;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Parses "p", "p/q" or a plain decimal such as "-0.375" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    const std::string_view s = detail::trim(text);
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const std::string_view den = s.substr(slash + 1);
        BigInt q;
        if (den.starts_with("2^")) {
            const std::string_view e = den.substr(2);
            unsigned k = 0;
            const auto [ptr, ec] = std::from_chars(e.data(), e.data() + e.size(), k);
            if (ec != std::errc{} || ptr != e.data() + e.size()) throw std::invalid_argument("malformed exponent");
            q = BigInt(1) << k;
        } else {
            q = detail::parse_bigint(den);
        }
        if (q.is_zero()) throw std::invalid_argument("zero denominator");
        return Rational(detail::parse_bigint(s.substr(0, slash)), q);
    }
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string digits(s.substr(0, dot));
        const std::string_view frac = s.substr(dot + 1);
        digits += frac;
        if (digits == "-" || digits == "+" || digits.empty()) throw std::invalid_argument("malformed decimal");
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        return Rational(detail::parse_bigint(digits), scale);
    }
    return Rational(detail::parse_bigint(s));
}

/// Parses a rational whose denominator is a power of two.
inline Dyadic parse_dyadic(std::string_view text) {
    const Rational r = parse_rational(text);
    const BigInt den = boost::multiprecision::denominator(r);
    const auto k = static_cast<std::int64_t>(boost::multiprecision::lsb(den));
    if ((BigInt(1) << static_cast<unsigned>(k)) != den)
        throw std::invalid_argument("not a dyadic rational: " + std::string(text));
    return Dyadic::normalize(boost::multiprecision::numerator(r), k);
}

inline std::string to_string(const Rational& r) {
    const BigInt& den = boost::multiprecision::denominator(r);
    if (den == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace rscorr
