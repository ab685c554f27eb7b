// Exact rational arithmetic on 64-bit integers.
//
// Every exponent in this project is a small rational: alpha and kappa have
// denominators of a few dozen at most, and the piecewise-linear algebra on
// them (crossover solving, balance tables) never leaves that range.  We keep
// numerator and denominator in int64_t, reduce eagerly, compute through
// __int128 intermediates, and throw if a result would not fit.  That makes
// every comparison and every equality test in the exponent tables exact;
// nothing downstream has to reason about floating-point ties.

#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fdecay {

class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { reduce(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    static Rational parse(std::string_view text);

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // "p" when the value is integral, "p/q" otherwise.
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                            i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                            i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational: division by zero");
        return make_checked(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { Rational r; r.num_ = -num_; r.den_ = den_; return r; }

    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        i128 lhs = i128(a.num_) * b.den_;
        i128 rhs = i128(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    using i128 = __int128;

    static Rational make_checked(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("rational: value out of 64-bit range");
        Rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void reduce() {
        if (den_ == 0) throw std::domain_error("rational: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    long long num_ = 0;
    long long den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
    auto fail = [&] { throw std::domain_error("rational: cannot parse \"" + std::string(text) + "\""); };
    if (text.empty()) fail();
    size_t slash = text.find('/');
    auto to_ll = [&](std::string_view part) -> long long {
        if (part.empty()) fail();
        size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(std::string(part), &pos);
        } catch (const std::exception&) {
            fail();
        }
        if (pos != part.size()) fail();
        return v;
    };
    if (slash == std::string_view::npos) return Rational(to_ll(text));
    return Rational(to_ll(text.substr(0, slash)), to_ll(text.substr(slash + 1)));
}

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

// Convenience literal-ish helper: rat(3, 2) == 3/2.
inline Rational rat(long long n, long long d = 1) { return Rational(n, d); }

}  // namespace fdecay
