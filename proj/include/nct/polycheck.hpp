#pragma once

// Exact verification that a symbol expression vanishes identically as an
// element of the algebra, for every positive invertible k.
//
// Terms are grouped by their skeleton, the ordered list of derivation
// atoms.  Within a group the word is X_0 rho_1 X_1 ... rho_p X_p with
// X_s = k^(r_s) B0^(m_s); evaluating k at independent spectral points t_s
// per gap (k = diag(t_0..t_p) against matrix units rho_s = E_{s-1,s} is a
// faithful family of evaluations) makes the group a rational function of
// (t_s, xi_l).  Clearing all denominators (1 + a2(t_s, xi))^(max m_s) and
// the negative k-powers turns the claim into a polynomial identity, which
// is checked coefficient by coefficient in exact arithmetic.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "nct/metric.hpp"
#include "nct/rational.hpp"
#include "nct/resolvent.hpp"
#include "nct/symbols.hpp"

namespace nct {

namespace detail {

// Sparse polynomial in t_0..t_p, xi_1..xi_3: exponent vector of length p+4.
using Poly = std::map<std::vector<int>, Rational>;

inline void poly_add(Poly& p, const std::vector<int>& mono, const Rational& c) {
    auto [it, inserted] = p.try_emplace(mono, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) p.erase(it);
    }
}

// Multiplies poly by (1 + sum_{l<dim} xi_l^2 t^c[l])^n with t the variable
// at position slot.
inline Poly mul_a2_power(const Poly& p, int slot, int n, const MetricDescriptor& m) {
    Poly out = p;
    for (int rep = 0; rep < n; ++rep) {
        Poly next;
        for (const auto& [mono, c] : out) {
            poly_add(next, mono, c);
            for (int l = 0; l < m.dim; ++l) {
                std::vector<int> mm = mono;
                mm[slot] += m.c[l];
                mm[mm.size() - 3 + l] += 2;
                poly_add(next, mm, c);
            }
        }
        out = std::move(next);
    }
    return out;
}

} // namespace detail

inline bool poly_zero(const SymbolExpr& e, const MetricDescriptor& m) {
    struct Entry {
        XiMono xi;
        std::vector<int> r, b;   // k-power and resolvent power per gap
        Rational c;
    };
    std::map<Word, std::vector<Entry>> groups;
    for (const auto& [t, c] : e.terms()) {
        if (c.pi_half() != 0)
            throw std::logic_error("poly_zero: unexpected power of pi");
        Word skel;
        Entry en;
        en.xi = t.xi;
        en.c = c.rat();
        en.r.assign(1, 0);
        en.b.assign(1, 0);
        for (const Atom& a : t.w) {
            switch (a.kind) {
                case AtomKind::KPow: en.r.back() += a.r; break;
                case AtomKind::B0: en.b.back() += a.r; break;
                case AtomKind::DK:
                    skel.push_back(a);
                    en.r.push_back(0);
                    en.b.push_back(0);
                    break;
                default:
                    throw std::logic_error("poly_zero: atom past the symbol stage");
            }
        }
        groups[skel].push_back(std::move(en));
    }

    for (const auto& [skel, entries] : groups) {
        const std::size_t gaps = skel.size() + 1;
        std::vector<int> bmax(gaps, 0), rmin(gaps, 0);
        for (const Entry& en : entries)
            for (std::size_t s = 0; s < gaps; ++s) {
                bmax[s] = std::max(bmax[s], en.b[s]);
                rmin[s] = std::min(rmin[s], en.r[s]);
            }
        detail::Poly poly;
        for (const Entry& en : entries) {
            std::vector<int> mono(gaps + 3, 0);
            for (std::size_t s = 0; s < gaps; ++s) mono[s] = en.r[s] - rmin[s];
            for (int l = 0; l < 3; ++l) mono[gaps + l] = en.xi[l];
            detail::Poly base;
            base.emplace(std::move(mono), en.c);
            for (std::size_t s = 0; s < gaps; ++s)
                base = detail::mul_a2_power(base, static_cast<int>(s), bmax[s] - en.b[s], m);
            for (const auto& [mn, cc] : base) detail::poly_add(poly, mn, cc);
        }
        if (!poly.empty()) return false;
    }
    return true;
}

// Graded residues of the composition sigma((P+1) B) - 1; all three must
// vanish identically.  Grade g collects the terms of homogeneity -g.
template <std::size_t N>
std::array<std::array<SymbolExpr, N>, N> parametrix_residue(const Parametrix<N>& p,
                                                            const MetricDescriptor& m,
                                                            int grade) {
    const auto& c = m.c;
    auto dxi = [&](const SymbolExpr& e, int j) { return xi_partial(j, e, c); };
    auto dlt = [&](const SymbolExpr& e, int j) { return delta(j, e, &c); };
    std::array<std::array<SymbolExpr, N>, N> out;
    SymbolExpr a2p1 = p.a2 + SymbolExpr::one();
    if (grade == 0) {
        for (std::size_t i = 0; i < N; ++i) {
            out[i][i] = p.b0 * a2p1 - SymbolExpr::one();
        }
        return out;
    }
    if (grade == 1) {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                out[i][j] = p.b1[i][j] * a2p1 + p.b0 * p.a1[i][j];
                if (i == j)
                    for (int l = 0; l < m.dim; ++l) out[i][j] += dxi(p.b0, l) * dlt(p.a2, l);
            }
        return out;
    }
    if (grade != 2) throw std::invalid_argument("parametrix_residue: grade must be 0, 1 or 2");
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            SymbolExpr r = p.b2[i][j] * a2p1 + p.b0 * p.a0[i][j];
            for (std::size_t l = 0; l < N; ++l) r += p.b1[i][l] * p.a1[l][j];
            for (int d = 0; d < m.dim; ++d) {
                r += dxi(p.b0, d) * dlt(p.a1[i][j], d);
                r += dxi(p.b1[i][j], d) * dlt(p.a2, d);
            }
            if (i == j) {
                Coefficient half(Rational(1, 2));
                for (int d1 = 0; d1 < m.dim; ++d1)
                    for (int d2 = 0; d2 < m.dim; ++d2) {
                        SymbolExpr piece = dxi(dxi(p.b0, d1), d2) * dlt(dlt(p.a2, d1), d2);
                        r += piece.scaled(half);
                    }
            }
            out[i][j] = std::move(r);
        }
    return out;
}

} // namespace nct
