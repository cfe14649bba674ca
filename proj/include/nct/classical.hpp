#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nct/curvature.hpp"
#include "nct/metric.hpp"

// Commutative limits. When all modular arguments go to zero every
// spectral weight tends to a finite constant and a density collapses to
// a polynomial in the jets of h, the logarithm of the conformal factor,
// with exponential prefactors from the k powers. This header takes that
// limit numerically, snaps the constants to small rationals and holds
// the reference polynomials the limits must equal.

namespace nct {

// One monomial coeff * exp(cexp * h) * prod_alpha delta^alpha(h). The
// volume factor of the density, pi^(-3/2) on three directions and
// pi^(-2) on two, stays implicit so that every coefficient is rational.
// Expressions are kept sorted by (cexp, jets) with zero coefficients
// dropped, so equality is plain entrywise comparison.
struct JetTerm {
    Rational coeff;
    Rational cexp;
    std::vector<MultiIndex> jets;  // each of total order 1 or 2, sorted
};

using ClassicalExpr = std::vector<JetTerm>;
using ClassicalMat = std::array<std::array<ClassicalExpr, 3>, 3>;

inline bool classical_equal(const ClassicalExpr& a, const ClassicalExpr& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i].coeff == b[i].coeff) || !(a[i].cexp == b[i].cexp)
            || a[i].jets != b[i].jets)
            return false;
    return true;
}

// Nearest rational with a small denominator. The limits of all the
// weight functions have denominators well below this bound, so a miss
// signals a limit that did not converge.
inline Rational rationalize(double x, double tol = 1e-6, int max_den = 96) {
    for (int q = 1; q <= max_den; ++q) {
        const double p = std::round(x * q);
        if (std::abs(x - p / q) <= tol)
            return Rational(static_cast<std::int64_t>(p), q);
    }
    std::ostringstream os;
    os << "rationalize: no denominator up to " << max_den << " within " << tol
       << " of " << x;
    throw std::runtime_error(os.str());
}

namespace detail {

using JetKey = std::pair<Rational, std::vector<MultiIndex>>;

inline ClassicalExpr from_map(const std::map<JetKey, Rational>& acc) {
    ClassicalExpr out;
    for (const auto& [key, c] : acc)
        if (!c.is_zero()) out.push_back({c, key.first, key.second});
    return out;
}

inline MultiIndex mi1(int i) {
    MultiIndex a{0, 0, 0};
    a[i] = 1;
    return a;
}

inline MultiIndex mi2(int i) {
    MultiIndex a{0, 0, 0};
    a[i] = 2;
    return a;
}

inline MultiIndex mi11(int i, int j) {
    MultiIndex a{0, 0, 0};
    a[i] += 1;
    a[j] += 1;
    return a;
}

}  // namespace detail

// Commutative limit of a density. Group values are extrapolated to the
// origin from 1e-6 and 2e-6 with one Richardson step, scaled by the
// volume factor and snapped to rationals. Log-derivative atoms become
// jets of h through k = exp(log_scale * h), one factor of log_scale per
// atom, and the k-power prefix becomes the exponential prefactor. The
// jets commute, so the two orderings of a mixed pair land on one
// monomial and their commutator part cancels there.
inline ClassicalExpr abelianize(const SpectralSum& density,
                                const MetricDescriptor& m) {
    const double volume = m.dim == 3 ? 5.56832799683170784528
                                     : 9.86960440108935861883;
    std::map<detail::JetKey, Rational> acc;
    for (const auto& [key, fns] : group_terms(density)) {
        const double eps = 1e-6;
        const std::vector<double> near(key.second.size(), eps);
        const std::vector<double> far(key.second.size(), 2 * eps);
        const double v0 = 2 * eval_group(fns, near) - eval_group(fns, far);

        Rational scale(1);
        std::vector<MultiIndex> jets;
        for (const Atom& at : key.second) {
            if (at.kind != AtomKind::DLogK)
                throw std::logic_error("abelianize: unexpected atom kind");
            jets.push_back(at.alpha);
            scale *= m.log_scale;
        }
        std::sort(jets.begin(), jets.end());
        acc[{Rational(key.first) * m.log_scale, std::move(jets)}] +=
            rationalize(volume * v0) * scale;
    }
    return detail::from_map(acc);
}

inline ClassicalMat abelianize_matrix(const SpectralMat& d,
                                      const MetricDescriptor& m) {
    ClassicalMat out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = abelianize(d[i][j], m);
    return out;
}

// The commutative scalar curvature densities the limits must reproduce:
//   conformal3      -e^(-h)/24 * sum_j (2 d_j^2 h - (d_j h)^2)
//   nonconformal3   -1/48 * (2 d_1^2 h + 2 d_2^2 h
//                            + 4 e^(-2h) d_3^2 h - 6 e^(-2h) (d_3 h)^2)
// and zero for the flat torus.
inline ClassicalExpr classical_scalar(const MetricDescriptor& m) {
    std::map<detail::JetKey, Rational> acc;
    if (m.name == "conformal3") {
        for (int j = 0; j < 3; ++j) {
            acc[{Rational(-1), {detail::mi2(j)}}] += Rational(-1, 12);
            acc[{Rational(-1), {detail::mi1(j), detail::mi1(j)}}] += Rational(1, 24);
        }
    } else if (m.name == "nonconformal3") {
        acc[{Rational(0), {detail::mi2(0)}}] += Rational(-1, 24);
        acc[{Rational(0), {detail::mi2(1)}}] += Rational(-1, 24);
        acc[{Rational(-2), {detail::mi2(2)}}] += Rational(-1, 12);
        acc[{Rational(-2), {detail::mi1(2), detail::mi1(2)}}] += Rational(1, 8);
    } else if (m.name != "flat3") {
        throw std::invalid_argument("classical_scalar: no reference limit for "
                                    + m.name);
    }
    return detail::from_map(acc);
}

// The commutative Ricci densities:
//   conformal3      entry (i,j) of
//                   -e^(-h)/8 * (delta_ij (sum_l d_l^2 h - (d_l h)^2)
//                                + d_i h d_j h + d_i d_j h)
//   nonconformal3   1/8 * [ e^(-2h)(2 (d_3 h)^2 - d_3^2 h) - d_1^2 h
//                           - d_2^2 h on the plane diagonal,
//                           2 e^(-2h)((d_3 h)^2 - d_3^2 h) on the axis,
//                           -e^(-h) d_i d_3 h on the mixed entries ]
// and zero for the flat torus.
inline ClassicalMat classical_ricci(const MetricDescriptor& m) {
    std::array<std::array<std::map<detail::JetKey, Rational>, 3>, 3> acc;
    if (m.name == "conformal3") {
        for (int i = 0; i < 3; ++i) {
            for (int l = 0; l < 3; ++l) {
                acc[i][i][{Rational(-1), {detail::mi2(l)}}] += Rational(-1, 8);
                acc[i][i][{Rational(-1), {detail::mi1(l), detail::mi1(l)}}] +=
                    Rational(1, 8);
            }
            acc[i][i][{Rational(-1), {detail::mi2(i)}}] += Rational(-1, 8);
            acc[i][i][{Rational(-1), {detail::mi1(i), detail::mi1(i)}}] +=
                Rational(-1, 8);
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                std::vector<MultiIndex> pr{detail::mi1(i), detail::mi1(j)};
                std::sort(pr.begin(), pr.end());
                acc[i][j][{Rational(-1), {detail::mi11(i, j)}}] += Rational(-1, 8);
                acc[i][j][{Rational(-1), std::move(pr)}] += Rational(-1, 8);
            }
        }
    } else if (m.name == "nonconformal3") {
        for (int p = 0; p < 2; ++p) {
            acc[p][p][{Rational(0), {detail::mi2(0)}}] += Rational(-1, 8);
            acc[p][p][{Rational(0), {detail::mi2(1)}}] += Rational(-1, 8);
            acc[p][p][{Rational(-2), {detail::mi2(2)}}] += Rational(-1, 8);
            acc[p][p][{Rational(-2), {detail::mi1(2), detail::mi1(2)}}] +=
                Rational(1, 4);
            acc[p][2][{Rational(-1), {detail::mi11(p, 2)}}] += Rational(-1, 8);
            acc[2][p][{Rational(-1), {detail::mi11(p, 2)}}] += Rational(-1, 8);
        }
        acc[2][2][{Rational(-2), {detail::mi2(2)}}] += Rational(-1, 4);
        acc[2][2][{Rational(-2), {detail::mi1(2), detail::mi1(2)}}] += Rational(1, 4);
    } else if (m.name != "flat3") {
        throw std::invalid_argument("classical_ricci: no reference limit for "
                                    + m.name);
    }
    ClassicalMat out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = detail::from_map(acc[i][j]);
    return out;
}

// Canonical text form, e.g. "-1/12 e^(-h) d1d1(h) + 1/24 e^(-h) d1(h) d1(h)".
inline std::string classical_str(const ClassicalExpr& e) {
    if (e.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const JetTerm& t : e) {
        if (!first) os << " + ";
        first = false;
        os << t.coeff.str();
        if (!t.cexp.is_zero()) {
            os << " e^(";
            if (t.cexp == Rational(1))
                os << "h";
            else if (t.cexp == Rational(-1))
                os << "-h";
            else
                os << t.cexp.str() << " h";
            os << ")";
        }
        for (const MultiIndex& a : t.jets) {
            os << " ";
            for (int d = 0; d < 3; ++d)
                for (int o = 0; o < a[d]; ++o) os << "d" << (d + 1);
            os << "(h)";
        }
    }
    return os.str();
}

}  // namespace nct
