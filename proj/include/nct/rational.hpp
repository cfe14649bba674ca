#pragma once

// Exact rational arithmetic on 64-bit numerator/denominator with overflow
// detection, plus a coefficient type that tracks an exact power of sqrt(pi).
// Every symbolic coefficient in the engine is a Coefficient, so a silent
// overflow here would corrupt results downstream; all narrowing from the
// 128-bit intermediates throws instead.

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <cmath>

namespace nct {

class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { Rational r; r.num_ = -num_; r.den_ = den_; return r; }

    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }

    Rational pow(int e) const {
        Rational r(1);
        Rational base = *this;
        if (e < 0) { base = Rational(1) / base; e = -e; }
        for (int i = 0; i < e; ++i) r *= base;
        return r;
    }

    double to_double() const { return double(num_) / double(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    static Rational make(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
        constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rational: value exceeds 64-bit range");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void reduce() { *this = make(num_, den_); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// Rational multiple of pi^(pi_half/2). Terms living at different powers of
// pi never need to be summed inside one expression; attempting it is a
// logic error upstream, so operator+ insists the powers agree.
class Coefficient {
public:
    Coefficient() = default;
    Coefficient(Rational r) : rat_(r) {}
    Coefficient(Rational r, int pi_half) : rat_(r), pi_half_(r.is_zero() ? 0 : pi_half) {}

    const Rational& rat() const { return rat_; }
    int pi_half() const { return pi_half_; }
    bool is_zero() const { return rat_.is_zero(); }

    friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.pi_half_ != b.pi_half_)
            throw std::logic_error("Coefficient: adding mismatched powers of sqrt(pi)");
        return Coefficient(a.rat_ + b.rat_, a.pi_half_);
    }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
        return Coefficient(a.rat_ * b.rat_, a.pi_half_ + b.pi_half_);
    }
    Coefficient operator-() const { return Coefficient(-rat_, pi_half_); }
    Coefficient& operator+=(const Coefficient& b) { return *this = *this + b; }
    Coefficient& operator*=(const Coefficient& b) { return *this = *this * b; }

    friend bool operator==(const Coefficient& a, const Coefficient& b) {
        return a.rat_ == b.rat_ && a.pi_half_ == b.pi_half_;
    }
    friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

    double to_double() const {
        const double pi = 3.14159265358979323846;
        return rat_.to_double() * std::pow(pi, pi_half_ / 2.0);
    }

    std::string str() const {
        std::string s = rat_.str();
        if (pi_half_ != 0 && !rat_.is_zero()) {
            s += " pi^(" + std::to_string(pi_half_) + "/2)";
        }
        return s;
    }

private:
    Rational rat_;
    int pi_half_ = 0;
};

} // namespace nct
