#pragma once

// Numeric side of the spectral functions.
//
// FSpec describes one member of the radial integral family
//
//   F(x) = int_0^inf u^(sum m_j - nu2/2) prod_j (u X_j + 1)^(-m_j) du,
//
// where each slot argument X_j is a product of term variables raised to the
// fixed exponent slot_exp (the principal k-power measured in units of the
// modular operator).  A SpectralFn is a finished factorised function of the
// per-operand modular variables: plain powers, at most one FSpec factor and
// any number of f/g factors from the log-k rewriting.  Everything is
// evaluated in logarithmic coordinates s_i, i.e. at x_i = e^{s_i}.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "nct/quadrature.hpp"
#include "nct/rational.hpp"
#include "nct/symbols.hpp"

namespace nct {

inline double quad_tol() {
    static const double tol = [] {
        if (const char* e = std::getenv("NCG_QUAD_TOL")) {
            double v = std::atof(e);
            if (v > 0) return v;
        }
        return 1e-12;
    }();
    return tol;
}

struct FSlot {
    std::vector<int> vars;   // term variable indices multiplied into X_j (empty: X_j = 1)
    int m;
};

struct FSpec {
    int nu2 = 0;             // twice the weight nu
    Rational slot_exp;       // exponent a/e' applied to the variable product
    std::vector<FSlot> slots;

    void canonicalize() {
        for (FSlot& s : slots) std::sort(s.vars.begin(), s.vars.end());
        std::sort(slots.begin(), slots.end(),
                  [](const FSlot& a, const FSlot& b) { return a.vars < b.vars; });
        std::vector<FSlot> out;
        for (FSlot& s : slots) {
            if (s.m == 0) continue;
            if (!out.empty() && out.back().vars == s.vars)
                out.back().m += s.m;
            else
                out.push_back(std::move(s));
        }
        slots = std::move(out);
    }
};

// Evaluates the radial integral with the slot arguments already reduced to
// doubles.  Results are cached because curvature expressions reuse a small
// set of (m, X) patterns across thousands of terms.
inline double fspec_eval(const FSpec& f, const std::vector<double>& s) {
    struct SlotVal {
        double x;
        int m;
    };
    std::vector<SlotVal> sv;
    sv.reserve(f.slots.size());
    int msum = 0;
    double se = f.slot_exp.to_double();
    for (const FSlot& sl : f.slots) {
        double acc = 0;
        for (int v : sl.vars) acc += s.at(v);
        sv.push_back({std::exp(se * acc), sl.m});
        msum += sl.m;
    }
    std::sort(sv.begin(), sv.end(), [](const SlotVal& a, const SlotVal& b) { return a.x < b.x; });

    static std::map<std::vector<std::uint64_t>, double> cache;
    std::vector<std::uint64_t> key;
    key.reserve(2 * sv.size() + 1);
    key.push_back(static_cast<std::uint64_t>(f.nu2));
    for (const SlotVal& v : sv) {
        key.push_back(std::bit_cast<std::uint64_t>(v.x));
        key.push_back(static_cast<std::uint64_t>(v.m));
    }
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    double uexp = msum - 0.5 * f.nu2;
    if (uexp <= -1 || static_cast<double>(msum) - uexp <= 1)
        throw std::domain_error("fspec_eval: divergent radial integral");
    auto integrand = [&](double u) {
        double val = std::pow(u, uexp);
        for (const SlotVal& v : sv) val *= std::pow(u * v.x + 1, -v.m);
        return val;
    };
    double val = integrate_half_line(integrand, quad_tol());
    cache.emplace(std::move(key), val);
    return val;
}

// f and g from rewriting k^-1 delta(k) in terms of delta(log k): for the
// modular weight e' these are
//   f(x)    = int_0^1 x^(s/e') ds
//   g(x, y) = int_0^1 int_0^t  x^(t/e') y^(s/e') ds dt
// evaluated at x = e^sx, y = e^sy by fixed order Gauss-Legendre after
// mapping the triangle to the unit square (the integrands are entire, so a
// 24 point tensor rule is exact to machine precision on the grids in use).
inline double f_eval(int eprime, double sx) {
    static std::map<std::pair<int, std::uint64_t>, double> cache;
    auto key = std::make_pair(eprime, std::bit_cast<std::uint64_t>(sx));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double c = sx / eprime;
    double val = gauss([&](double s) { return std::exp(c * s); }, 0.0, 1.0, 24);
    cache.emplace(key, val);
    return val;
}

inline double g_eval(int eprime, double sx, double sy) {
    static std::map<std::tuple<int, std::uint64_t, std::uint64_t>, double> cache;
    auto key = std::make_tuple(eprime, std::bit_cast<std::uint64_t>(sx),
                               std::bit_cast<std::uint64_t>(sy));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double cx = sx / eprime, cy = sy / eprime;
    auto inner = [&](double a) {
        return a * std::exp(cx * a) *
               gauss([&](double b) { return std::exp(cy * a * b); }, 0.0, 1.0, 24);
    };
    double val = gauss(inner, 0.0, 1.0, 24);
    cache.emplace(key, val);
    return val;
}

struct FGLeaf {
    bool is_g;
    int v1;
    int v2 = -1;   // second variable for g
};

struct SpectralFn {
    Coefficient coeff;
    std::vector<Rational> powers;   // plain exponent of x_i per variable
    bool has_fspec = false;
    FSpec fspec;
    std::vector<FGLeaf> leaves;
    int eprime = 2;

    int nvars() const { return static_cast<int>(powers.size()); }

    double eval(const std::vector<double>& s) const {
        double acc = 0;
        for (std::size_t i = 0; i < powers.size(); ++i)
            if (!powers[i].is_zero()) acc += powers[i].to_double() * s[i];
        double val = coeff.to_double() * std::exp(acc);
        if (has_fspec) val *= fspec_eval(fspec, s);
        for (const FGLeaf& l : leaves)
            val *= l.is_g ? g_eval(eprime, s.at(l.v1), s.at(l.v2)) : f_eval(eprime, s.at(l.v1));
        return val;
    }
};

// One contribution to a curvature density: a left prefix power of k and a
// spectral function applied to the word of operand atoms, variable i being
// the modular variable across atom i.
struct SpectralTerm {
    Word w;
    int prefix = 0;
    SpectralFn fn;
};

using SpectralSum = std::vector<SpectralTerm>;

} // namespace nct
