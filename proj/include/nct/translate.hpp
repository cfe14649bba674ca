#pragma once

// Rewrites every operand k^-1 delta^alpha(k) in terms of delta^alpha(log k)
// using the expansion of derivations of the exponential:
//
//   k^-1 delta(k)          = f(D) (delta log k)
//   k^-1 delta_i delta_j(k) = f(D)(delta_i delta_j log k)
//                           + g(D_1, D_2)(delta_i log k . delta_j log k)
//                           + g(D_1, D_2)(delta_j log k . delta_i log k)
//
// with f, g as in fspec.hpp and D the modular operator.  For i = j the two
// g terms coincide, giving coefficient 2.  Splitting an operand duplicates
// its modular variable: every structure that referenced s_v now sees the
// product s_v1 s_v2.

#include <stdexcept>
#include <utility>
#include <vector>

#include "nct/fspec.hpp"
#include "nct/spectral.hpp"
#include "nct/symbols.hpp"

namespace nct {

namespace detail {

// Duplicates variable v into (v, v+1); the caller fills in the two atoms.
inline void split_variable(SpectralTerm& t, int v) {
    t.w.insert(t.w.begin() + v + 1, t.w[v]);
    t.fn.powers.insert(t.fn.powers.begin() + v + 1, t.fn.powers[v]);
    for (FGLeaf& l : t.fn.leaves) {
        if (l.v1 > v) ++l.v1;
        if (l.v2 > v) ++l.v2;
    }
    for (FSlot& s : t.fn.fspec.slots) {
        std::vector<int> vars;
        for (int x : s.vars) {
            if (x == v) {
                vars.push_back(v);
                vars.push_back(v + 1);
            } else {
                vars.push_back(x > v ? x + 1 : x);
            }
        }
        s.vars = std::move(vars);
    }
}

inline void translate_rec(SpectralTerm t, std::size_t v, std::vector<SpectralTerm>& out) {
    if (v == t.w.size()) {
        out.push_back(std::move(t));
        return;
    }
    const Atom a = t.w[v];
    if (a.kind != AtomKind::UK)
        throw std::logic_error("translate: operand is not a UK atom");
    const int ord = mi_order(a.alpha);
    if (ord == 1) {
        t.w[v] = Atom::dlogk(a.alpha);
        t.fn.leaves.push_back({false, static_cast<int>(v), -1});
        translate_rec(std::move(t), v + 1, out);
        return;
    }
    if (ord != 2) throw std::logic_error("translate: derivation order above two");

    int i = 0;
    while (a.alpha[i] == 0) ++i;
    int j = i;
    if (a.alpha[i] != 2) {
        j = i + 1;
        while (a.alpha[j] == 0) ++j;
    }

    SpectralTerm head = t;
    head.w[v] = Atom::dlogk(a.alpha);
    head.fn.leaves.push_back({false, static_cast<int>(v), -1});
    translate_rec(std::move(head), v + 1, out);

    auto pair_branch = [&](int first, int second, const Rational& mult) {
        SpectralTerm tb = t;
        split_variable(tb, static_cast<int>(v));
        tb.w[v] = Atom::dlogk(mi_unit(first));
        tb.w[v + 1] = Atom::dlogk(mi_unit(second));
        tb.fn.leaves.push_back({true, static_cast<int>(v), static_cast<int>(v) + 1});
        tb.fn.coeff *= Coefficient(mult);
        translate_rec(std::move(tb), v + 2, out);
    };
    if (i == j) {
        pair_branch(i, i, Rational(2));
    } else {
        pair_branch(i, j, Rational(1));
        pair_branch(j, i, Rational(1));
    }
}

} // namespace detail

inline std::vector<SpectralTerm> translate(const SpectralTerm& t) {
    std::vector<SpectralTerm> out;
    detail::translate_rec(t, 0, out);
    return out;
}

} // namespace nct
