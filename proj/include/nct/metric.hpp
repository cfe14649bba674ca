#pragma once

// Metric families on the noncommutative 2- and 3-torus, each described by a
// positive invertible Weyl-type element k together with the second order
// operators whose heat expansion is computed.  Operators are stored as sums
// of elementary compositions of left multiplications by integer powers of k
// and the basic derivations, written left to right in operator order (the
// rightmost factor acts first).

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nct/symbols.hpp"

namespace nct {

struct OpToken {
    bool is_delta;
    int v;   // direction (0-based) for a derivation, exponent for a k-power

    static OpToken d(int j) { return {true, j}; }
    static OpToken k(int r) { return {false, r}; }
};

struct OpComp {
    Rational coeff;
    std::vector<OpToken> toks;
};

using Operator = std::vector<OpComp>;

// Full symbol of a composition acting on a test element x: normal order all
// k-coefficients to the left of the derivations still waiting to land on x,
// then record those pending derivations as a xi monomial.  The terms of
// total xi degree 2, 1, 0 are the principal, sub and zero order symbols.
inline SymbolExpr operator_symbol(const Operator& op) {
    SymbolExpr total;
    for (const OpComp& comp : op) {
        SymbolExpr expr = SymbolExpr::one();
        for (auto it = comp.toks.rbegin(); it != comp.toks.rend(); ++it) {
            if (!it->is_delta) {
                expr = SymbolExpr::from_word({Atom::kpow(it->v)}) * expr;
            } else {
                SymbolExpr next = delta(it->v, expr);
                for (const auto& [t, c] : expr.terms()) {
                    XiMono xi = t.xi;
                    xi[it->v] += 1;
                    next.add(t.w, xi, c);
                }
                expr = std::move(next);
            }
        }
        total += expr.scaled(Coefficient(comp.coeff));
    }
    return total;
}

struct MetricDescriptor {
    std::string name;
    int dim;                    // 2 or 3
    std::array<int, 3> c;       // principal symbol a2 = sum_l xi_l^2 k^c[l]
    int radial_a;               // resolvent factor after the fibre integral: (u k^radial_a + 1)^-1
    int eprime;                 // modular operator is conjugation by k^eprime
    bool conformal;             // reduction by a round sphere/circle fibre integral
    Coefficient prefactor;      // trace density normalisation in front of the symbol integral
    Rational log_scale;         // k = exp(log_scale * h)
    Operator laplace0;          // operator on functions
    bool has_one_form = false;
    std::array<std::array<Operator, 3>, 3> laplace1{};  // operator on 1-forms
};

namespace detail {

inline Operator comp1(std::vector<OpToken> t) { return {{Rational(1), std::move(t)}}; }

inline void add_comp(Operator& op, Rational c, std::vector<OpToken> t) {
    op.push_back({c, std::move(t)});
}

} // namespace detail

// dim 3, k = exp(h/2), conformally rescaled flat metric.  The function
// operator is sum_j k^3 delta_j k^-2 delta_j k^3 and the principal symbol
// is k^4 |xi|^2.
inline MetricDescriptor metric_conformal3() {
    using detail::add_comp;
    MetricDescriptor m;
    m.name = "conformal3";
    m.dim = 3;
    m.c = {4, 4, 4};
    m.radial_a = 4;
    m.eprime = 6;
    m.conformal = true;
    m.prefactor = Coefficient(Rational(1, 8), -7);
    m.log_scale = Rational(1, 2);
    for (int j = 0; j < 3; ++j)
        add_comp(m.laplace0, Rational(1),
                 {OpToken::k(3), OpToken::d(j), OpToken::k(-2), OpToken::d(j), OpToken::k(3)});
    m.has_one_form = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Operator& op = m.laplace1[i][j];
            if (i == j) {
                for (int l = 0; l < 3; ++l) {
                    if (l == i) continue;
                    add_comp(op, Rational(1),
                             {OpToken::k(1), OpToken::d(l), OpToken::k(2), OpToken::d(l), OpToken::k(1)});
                }
                add_comp(op, Rational(1),
                         {OpToken::k(-1), OpToken::d(i), OpToken::k(6), OpToken::d(i), OpToken::k(-1)});
            } else {
                add_comp(op, Rational(-1),
                         {OpToken::k(1), OpToken::d(j), OpToken::k(2), OpToken::d(i), OpToken::k(1)});
                add_comp(op, Rational(1),
                         {OpToken::k(-1), OpToken::d(i), OpToken::k(6), OpToken::d(j), OpToken::k(-1)});
            }
        }
    return m;
}

// dim 3, k = exp(h), only the third direction keeps its flat length scale.
// The principal symbol k^2 (xi_1^2 + xi_2^2) + xi_3^2 is not a conformal
// rescaling of the flat one.
inline MetricDescriptor metric_nonconformal3() {
    using detail::add_comp;
    MetricDescriptor m;
    m.name = "nonconformal3";
    m.dim = 3;
    m.c = {2, 2, 0};
    m.radial_a = 2;
    m.eprime = 2;
    m.conformal = false;
    m.prefactor = Coefficient(Rational(1, 8), -7);
    m.log_scale = Rational(1);
    add_comp(m.laplace0, Rational(1), {OpToken::k(1), OpToken::d(0), OpToken::d(0), OpToken::k(1)});
    add_comp(m.laplace0, Rational(1), {OpToken::k(1), OpToken::d(1), OpToken::d(1), OpToken::k(1)});
    add_comp(m.laplace0, Rational(1),
             {OpToken::k(1), OpToken::d(2), OpToken::k(-2), OpToken::d(2), OpToken::k(1)});
    m.has_one_form = true;
    for (int i : {0, 1}) {
        Operator& diag = m.laplace1[i][i];
        add_comp(diag, Rational(1), {OpToken::d(0), OpToken::k(2), OpToken::d(0)});
        add_comp(diag, Rational(1), {OpToken::d(1), OpToken::k(2), OpToken::d(1)});
        add_comp(diag, Rational(1), {OpToken::d(2), OpToken::d(2)});
    }
    add_comp(m.laplace1[0][1], Rational(1), {OpToken::d(0), OpToken::k(2), OpToken::d(1)});
    add_comp(m.laplace1[0][1], Rational(-1), {OpToken::d(1), OpToken::k(2), OpToken::d(0)});
    add_comp(m.laplace1[1][0], Rational(1), {OpToken::d(1), OpToken::k(2), OpToken::d(0)});
    add_comp(m.laplace1[1][0], Rational(-1), {OpToken::d(0), OpToken::k(2), OpToken::d(1)});
    for (int i : {0, 1}) {
        Operator& up = m.laplace1[i][2];
        add_comp(up, Rational(-1), {OpToken::d(i), OpToken::d(2), OpToken::k(1)});
        add_comp(up, Rational(1), {OpToken::d(i), OpToken::k(2), OpToken::d(2), OpToken::k(-1)});
        Operator& lo = m.laplace1[2][i];
        add_comp(lo, Rational(1), {OpToken::k(-1), OpToken::d(2), OpToken::k(2), OpToken::d(i)});
        add_comp(lo, Rational(-1), {OpToken::k(1), OpToken::d(2), OpToken::d(i)});
    }
    Operator& d33 = m.laplace1[2][2];
    add_comp(d33, Rational(1), {OpToken::k(1), OpToken::d(0), OpToken::d(0), OpToken::k(1)});
    add_comp(d33, Rational(1), {OpToken::k(1), OpToken::d(1), OpToken::d(1), OpToken::k(1)});
    add_comp(d33, Rational(1),
             {OpToken::k(-1), OpToken::d(2), OpToken::k(2), OpToken::d(2), OpToken::k(-1)});
    return m;
}

// dim 2, k = exp(h), conformally rescaled flat metric on the 2-torus.
// The trace normalisation is pinned so that the planar part of the
// three-dimensional density equals sqrt(pi) times this density, the exact
// relation for an operator that splits off a flat circle factor.
inline MetricDescriptor metric_conformal2() {
    using detail::add_comp;
    MetricDescriptor m;
    m.name = "conformal2";
    m.dim = 2;
    m.c = {2, 2, 0};
    m.radial_a = 2;
    m.eprime = 2;
    m.conformal = true;
    m.prefactor = Coefficient(Rational(1, 8), -6);
    m.log_scale = Rational(1);
    for (int j = 0; j < 2; ++j)
        add_comp(m.laplace0, Rational(1), {OpToken::k(1), OpToken::d(j), OpToken::d(j), OpToken::k(1)});
    return m;
}

// Flat 3-torus, k = 1.  Every curvature density vanishes; kept as a test
// degeneration of the machinery.
inline MetricDescriptor metric_flat3() {
    using detail::add_comp;
    MetricDescriptor m;
    m.name = "flat3";
    m.dim = 3;
    m.c = {0, 0, 0};
    m.radial_a = 0;
    m.eprime = 2;
    m.conformal = true;
    m.prefactor = Coefficient(Rational(1, 8), -7);
    m.log_scale = Rational(1);
    for (int j = 0; j < 3; ++j)
        add_comp(m.laplace0, Rational(1), {OpToken::d(j), OpToken::d(j)});
    return m;
}

inline const MetricDescriptor* metric_by_name(std::string_view name) {
    static const MetricDescriptor conf3 = metric_conformal3();
    static const MetricDescriptor nonconf3 = metric_nonconformal3();
    static const MetricDescriptor conf2 = metric_conformal2();
    if (name == "conformal3") return &conf3;
    if (name == "nonconformal3") return &nonconf3;
    if (name == "conformal2") return &conf2;
    return nullptr;
}

} // namespace nct
