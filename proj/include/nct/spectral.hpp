#pragma once

// Rearrangement of a radial integrand into a spectral function applied to a
// word of operands.
//
// For k diagonalised, the value of  X_0 rho_1 X_1 ... rho_p X_p  on matrix
// units depends on the spectral point of k at each gap, and crossing the
// operand rho_i multiplies it by s_i^(1/e'), s_i the eigenvalue of the
// modular operator (conjugation by k^e') on rho_i.  Rescaling u by the
// leftmost spectral point k^(-a) turns every radial factor (u k^a + 1)^-m
// at gap j into (u prod_{h<=j} s_h^(a/e') + 1)^-m and leaves an overall
// left power of k, so each radial term becomes
//
//   k^prefix  F(s_1, ..., s_p) (rho_1 ... rho_p).
//
// Normalisation then removes the diagonal operands: a k-power is itself a
// modular eigenvector with eigenvalue 1, so its slot evaluates at the
// running spectral point and is extracted as prefix times crossing powers
// s_i^(r/e') of the operands to its left, and delta^alpha(k) splits as
// k * [k^-1 delta^alpha(k)] whose k is extracted the same way.  After this
// every operand is a UK atom and the total k-degree (prefix plus atom
// degrees) is unchanged.

#include <stdexcept>
#include <vector>

#include "nct/fspec.hpp"
#include "nct/metric.hpp"
#include "nct/reduce.hpp"
#include "nct/symbols.hpp"

namespace nct {

inline SpectralTerm to_spectral(const RadialTerm& t, const MetricDescriptor& m) {
    SpectralTerm out;
    out.fn.coeff = t.coeff;
    out.fn.eprime = m.eprime;
    out.fn.has_fspec = true;
    out.fn.fspec.nu2 = t.nu2;
    out.fn.fspec.slot_exp = Rational(m.radial_a, m.eprime);

    int msum = 0;
    std::vector<int> seen;   // variable indices of operands passed so far
    for (const Atom& a : t.w) {
        if (a.kind == AtomKind::B0u) {
            out.fn.fspec.slots.push_back({seen, a.r});
            msum += a.r;
        } else if (a.kind == AtomKind::KPow || a.kind == AtomKind::DK) {
            seen.push_back(static_cast<int>(out.w.size()));
            out.w.push_back(a);
        } else {
            throw std::logic_error("to_spectral: word is not radial");
        }
    }
    out.fn.fspec.canonicalize();
    out.fn.powers.assign(out.w.size(), Rational(0));

    int num = m.radial_a * (t.nu2 - 2) - 2 * m.radial_a * msum;
    if (num % 2) throw std::logic_error("to_spectral: fractional prefix");
    out.prefix = num / 2;
    return out;
}

// Total power of k carried by a spectral term; invariant under
// normalisation and the log-k rewriting.
inline int spectral_k_degree(const SpectralTerm& t) {
    int deg = t.prefix;
    for (const Atom& a : t.w) {
        if (a.kind == AtomKind::KPow)
            deg += a.r;
        else if (a.kind == AtomKind::DK)
            deg += 1;
    }
    return deg;
}

namespace detail {

// Removes variable v (whose modular eigenvalue is 1) from a spectral term:
// drops its power entry, renumbers leaf and slot references, and merges
// slots that have become identical.
inline void drop_variable(SpectralTerm& t, int v) {
    t.w.erase(t.w.begin() + v);
    t.fn.powers.erase(t.fn.powers.begin() + v);
    for (FGLeaf& l : t.fn.leaves) {
        if (l.v1 > v) --l.v1;
        if (l.v2 > v) --l.v2;
    }
    for (FSlot& s : t.fn.fspec.slots) {
        std::vector<int> vars;
        for (int x : s.vars) {
            if (x == v) continue;
            vars.push_back(x > v ? x - 1 : x);
        }
        s.vars = std::move(vars);
    }
    t.fn.fspec.canonicalize();
}

} // namespace detail

inline void normalize_spectral(SpectralTerm& t) {
    const int ep = t.fn.eprime;
    // delta^alpha(k) = k * UK(alpha): the k evaluates at the spectral point
    // reached after the operands to its left.
    for (std::size_t v = 0; v < t.w.size(); ++v) {
        if (t.w[v].kind != AtomKind::DK) continue;
        t.w[v].kind = AtomKind::UK;
        t.prefix += 1;
        for (std::size_t i = 0; i < v; ++i) t.fn.powers[i] += Rational(1, ep);
    }
    for (int v = static_cast<int>(t.w.size()) - 1; v >= 0; --v) {
        if (t.w[v].kind != AtomKind::KPow) continue;
        int r = t.w[v].r;
        t.prefix += r;
        for (int i = 0; i < v; ++i) t.fn.powers[i] += Rational(r, ep);
        detail::drop_variable(t, v);
    }
    for (const Atom& a : t.w)
        if (a.kind != AtomKind::UK)
            throw std::logic_error("normalize_spectral: residual non-UK operand");
}

} // namespace nct
