#pragma once

// Fibre integral over the covariable.  A homogeneous symbol term is turned
// into a radial integrand in u = |xi|^2 (suitably rescaled) by splitting
// off the angular average, whose moments are exact Gamma quotients.
//
// Conformal route (principal symbol k^a |xi|^2): polar coordinates on the
// round fibre sphere or circle; every resolvent factor becomes the radial
// one directly.
//
// Non-conformal route (principal symbol k^2(xi_1^2+xi_2^2) + xi_3^2): with
// xi_1 = sqrt(u(1+eta^2)) cos t, xi_2 = sqrt(u(1+eta^2)) sin t, xi_3 = eta,
// every factor a2 + 1 factorises as (1+eta^2)(u k^2 + 1), so the eta and
// angle integrals separate from the operator word and are again exact
// Gamma quotients.

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nct/metric.hpp"
#include "nct/rational.hpp"
#include "nct/symbols.hpp"

namespace nct {

inline Rational gamma_int(int n) {
    if (n < 1) throw std::domain_error("gamma_int: nonpositive argument");
    Rational r(1);
    for (int i = 2; i < n; ++i) r *= Rational(i);
    return r;
}

// Gamma(twice/2) for positive arguments; half-integer values carry sqrt(pi).
inline Coefficient gamma_half(int twice) {
    if (twice <= 0) throw std::domain_error("gamma_half: nonpositive argument");
    if (twice % 2 == 0) return Coefficient(gamma_int(twice / 2));
    int n = (twice - 1) / 2;   // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
    Rational r(1);
    for (int i = 1; i <= n; ++i) r *= Rational(2 * i * (2 * i - 1), 4 * i);
    return Coefficient(r, 1);
}

// int_0^{2pi} cos^p sin^q, zero unless both powers are even.
inline Coefficient circle_moment(int p, int q) {
    if (p % 2 || q % 2) return Coefficient();
    Coefficient num = Coefficient(Rational(2)) * gamma_half(p + 1) * gamma_half(q + 1);
    return Coefficient(num.rat() / gamma_int((p + q) / 2 + 1), num.pi_half());
}

// Average of omega^beta over the unit sphere fibre, times its area measure.
inline Coefficient sphere_moment(const XiMono& beta) {
    for (int j = 0; j < 3; ++j)
        if (beta[j] % 2) return Coefficient();
    Coefficient num = Coefficient(Rational(2)) * gamma_half(beta[0] + 1) *
                      gamma_half(beta[1] + 1) * gamma_half(beta[2] + 1);
    Coefficient den = gamma_half(xi_degree(beta) + 3);
    return Coefficient(num.rat() / den.rat(), num.pi_half() - den.pi_half());
}

struct RadialTerm {
    Coefficient coeff;   // includes the density prefactor, measure and moments
    int nu2 = 0;         // integrand carries u^(sum of B0u powers - nu2/2)
    Word w;              // KPow, B0u and DK atoms only
};

namespace detail {

inline void word_counts(const Word& w, int& b0sum, bool& clean) {
    b0sum = 0;
    clean = true;
    for (const Atom& a : w) {
        if (a.kind == AtomKind::B0)
            b0sum += a.r;
        else if (a.kind != AtomKind::KPow && a.kind != AtomKind::DK)
            clean = false;
    }
}

inline Word to_radial_word(const Word& w) {
    Word out = w;
    for (Atom& a : out)
        if (a.kind == AtomKind::B0) a.kind = AtomKind::B0u;
    return out;
}

} // namespace detail

inline std::vector<RadialTerm> reduce(const SymbolExpr& e, const MetricDescriptor& m) {
    std::map<std::pair<int, Word>, Coefficient> acc;
    Coefficient scale = m.prefactor * Coefficient(Rational(1, 2));
    for (const auto& [t, c] : e.terms()) {
        int b0sum;
        bool clean;
        detail::word_counts(t.w, b0sum, clean);
        if (!clean) throw std::logic_error("reduce: word has atoms past the symbol stage");

        Coefficient moment;
        int nu2;
        if (m.conformal) {
            if (m.dim == 3) {
                moment = sphere_moment(t.xi);
                nu2 = 2 * b0sum - xi_degree(t.xi) - 1;
            } else {
                if (t.xi[2] != 0) throw std::logic_error("reduce: third direction on the 2-torus");
                moment = circle_moment(t.xi[0], t.xi[1]);
                nu2 = 2 * b0sum - xi_degree(t.xi);
            }
        } else {
            int p = t.xi[0], q = t.xi[1], e2 = t.xi[2];
            if (p % 2 || q % 2 || e2 % 2) {
                moment = Coefficient();
                nu2 = 0;
            } else {
                int A = (p + q) / 2, eta = e2 / 2;
                int P = b0sum - A - 1;
                // eta integral: int eta^(2 e) (1+eta^2)^(A + 1 - M) d eta
                if (2 * P - 2 * eta - 1 <= 0)
                    throw std::logic_error("reduce: divergent eta integral");
                Coefficient etam = gamma_half(2 * eta + 1) * gamma_half(2 * P - 2 * eta - 1);
                etam = Coefficient(etam.rat() / gamma_int(P), etam.pi_half());
                moment = circle_moment(p, q) * etam;
                nu2 = 2 * (b0sum - A);
            }
        }
        if (moment.is_zero()) continue;

        Coefficient coeff = c * moment * scale;
        auto key = std::make_pair(nu2, detail::to_radial_word(t.w));
        auto [it, inserted] = acc.try_emplace(std::move(key), coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) acc.erase(it);
        }
    }
    std::vector<RadialTerm> out;
    out.reserve(acc.size());
    for (auto& [key, coeff] : acc) out.push_back({coeff, key.first, key.second});
    return out;
}

} // namespace nct
