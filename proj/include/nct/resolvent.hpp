#pragma once

// Resolvent parametrix at spectral point -1.  The symbol of (P+1)^-1 is
// expanded into graded pieces b_0, b_1, b_2 where b_j collects the terms of
// homogeneity -2-j under xi -> t xi, k-degree fixed.  The recursion below is
// the expanded form of the composition rule sigma(AB) ~ sum_alpha
// (1/alpha!) d^alpha_xi(sigma_A) delta^alpha(sigma_B) truncated at total
// derivation order two, which is exact for the second density.
//
// One-form operators are matrices over the algebra with a common scalar
// principal symbol; the recursion is the same with entrywise products.

#include <array>
#include <cstddef>
#include <stdexcept>

#include "nct/metric.hpp"
#include "nct/symbols.hpp"

namespace nct {

template <std::size_t N>
using SymMat = std::array<std::array<SymbolExpr, N>, N>;

namespace detail {

template <std::size_t N>
SymMat<N> mat_mul(const SymMat<N>& x, const SymMat<N>& y) {
    SymMat<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t l = 0; l < N; ++l) out[i][j] += x[i][l] * y[l][j];
    return out;
}

template <std::size_t N>
SymMat<N> mat_scalar_right(const SymMat<N>& x, const SymbolExpr& s) {
    SymMat<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out[i][j] = x[i][j] * s;
    return out;
}

template <std::size_t N, typename Fn>
SymMat<N> mat_map(const SymMat<N>& x, Fn&& fn) {
    SymMat<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out[i][j] = fn(x[i][j]);
    return out;
}

} // namespace detail

template <std::size_t N>
struct Parametrix {
    SymbolExpr a2;            // common scalar principal symbol
    SymMat<N> a1, a0;         // lower order symbol matrices
    SymbolExpr b0;            // (a2 + 1)^-1
    SymMat<N> b1, b2;
};

// Builds b_0, b_1, b_2 for a matrix of compositions whose principal symbol
// is scalar: diagonal entries must share it exactly and off-diagonal ones
// must have none, which holds for all operators produced by the metric
// descriptors and is checked here.
template <std::size_t N>
Parametrix<N> parametrix(const std::array<std::array<Operator, N>, N>& op,
                         const MetricDescriptor& m) {
    Parametrix<N> p;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            SymbolExpr full = operator_symbol(op[i][j]);
            SymbolExpr top = full.xi_part(2);
            if (i == j) {
                if (i == 0)
                    p.a2 = top;
                else if (!(top - p.a2).is_zero())
                    throw std::logic_error("parametrix: principal symbol is not scalar");
            } else if (!top.is_zero()) {
                throw std::logic_error("parametrix: off-diagonal principal symbol");
            }
            p.a1[i][j] = full.xi_part(1);
            p.a0[i][j] = full.xi_part(0);
        }

    const auto& c = m.c;
    const int dim = m.dim;
    p.b0 = SymbolExpr::from_word({Atom::b0(1)});

    auto dxi = [&](const SymbolExpr& e, int j) { return xi_partial(j, e, c); };
    auto dlt = [&](const SymbolExpr& e, int j) { return delta(j, e, &c); };

    // b1 = -b0 a1 b0 - sum_j dxi_j(b0) delta_j(a2) b0
    SymMat<N> b1 = detail::mat_scalar_right(detail::mat_map(p.a1, [&](const SymbolExpr& e) {
        return -(p.b0 * e);
    }), p.b0);
    SymbolExpr b1_scalar;
    for (int j = 0; j < dim; ++j) b1_scalar -= dxi(p.b0, j) * dlt(p.a2, j) * p.b0;
    for (std::size_t i = 0; i < N; ++i) b1[i][i] += b1_scalar;
    p.b1 = b1;

    // b2 = -(b0 a0 + b1 a1) b0
    //      - sum_i (dxi_i(b0) delta_i(a1) + dxi_i(b1) delta_i(a2)) b0
    //      - 1/2 sum_{i,j} dxi_i dxi_j(b0) delta_i delta_j(a2) b0
    SymMat<N> acc = detail::mat_map(p.a0, [&](const SymbolExpr& e) { return -(p.b0 * e); });
    {
        SymMat<N> b1a1 = detail::mat_mul(p.b1, p.a1);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) acc[i][j] -= b1a1[i][j];
    }
    for (int i = 0; i < dim; ++i) {
        SymbolExpr dxb0 = dxi(p.b0, i);
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t s = 0; s < N; ++s) acc[r][s] -= dxb0 * dlt(p.a1[r][s], i);
        SymMat<N> dxb1 = detail::mat_map(p.b1, [&](const SymbolExpr& e) { return dxi(e, i); });
        SymbolExpr da2 = dlt(p.a2, i);
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t s = 0; s < N; ++s) acc[r][s] -= dxb1[r][s] * da2;
    }
    SymbolExpr second;
    Coefficient half(Rational(1, 2));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            SymbolExpr piece = dxi(dxi(p.b0, i), j) * dlt(dlt(p.a2, i), j);
            second -= piece.scaled(half);
        }
    for (std::size_t r = 0; r < N; ++r) acc[r][r] += second;
    p.b2 = detail::mat_scalar_right(acc, p.b0);
    return p;
}

inline Parametrix<1> parametrix_scalar(const Operator& op, const MetricDescriptor& m) {
    std::array<std::array<Operator, 1>, 1> wrap{{{op}}};
    return parametrix<1>(wrap, m);
}

// Each term of b_j must satisfy (xi degree) - 2 (resolvent power) = -2 - j.
inline bool homogeneous(const SymbolExpr& e, int j) {
    for (const auto& [t, c] : e.terms()) {
        (void)c;
        int b0count = 0;
        for (const Atom& a : t.w)
            if (a.kind == AtomKind::B0) b0count += a.r;
        if (xi_degree(t.xi) - 2 * b0count != -2 - j) return false;
    }
    return true;
}

} // namespace nct
