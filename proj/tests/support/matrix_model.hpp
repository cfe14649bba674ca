#pragma once

// Finite dimensional oracle for the spectral rearrangement stages.
//
// k is a fixed positive diagonal matrix and each derivation value delta(k),
// delta delta(k) is an independent random matrix; nothing else is assumed.
// A radial word then has an honest value: an entrywise integral over u of
// the matrix product with (u k^a + 1)^-m for the resolvent factors.  A
// spectral term has an honest value too: a sum over index paths where each
// operand contributes one matrix entry and the attached function is read at
// the modular logs s_v = e' (h_{path(v+1)} - h_{path(v)}).  The two must
// agree, which checks the slot bookkeeping, prefix, crossing powers and the
// log-k rewriting against nothing but matrix arithmetic and quadrature.
//
// Values of derivations of log k come from the eigenbasis form of the
// derivative of a matrix function (divided differences of log), so the
// rewriting of k^-1 delta(k) through f and g is tested as an identity, not
// against itself.

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "nct/fspec.hpp"
#include "nct/quadrature.hpp"
#include "nct/symbols.hpp"

namespace nct::testing {

constexpr int NM = 4;
using Mat = std::array<std::array<double, NM>, NM>;

inline Mat mat_zero() {
    Mat m{};
    return m;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    Mat r{};
    for (int i = 0; i < NM; ++i)
        for (int k = 0; k < NM; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < NM; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

// first divided difference of log
inline double dd1(double x, double y) {
    if (x == y) return 1.0 / x;
    return (std::log(x) - std::log(y)) / (x - y);
}

// second divided difference of log, symmetric in its arguments
inline double dd2(double x, double y, double z) {
    if (x == y && y == z) return -0.5 / (x * x);
    if (y == z) std::swap(x, z);          // now any equal pair sits in (x, y)
    if (x == z) std::swap(y, z);
    if (x == y) return ((x - z) / x - std::log(x) + std::log(z)) / ((x - z) * (x - z));
    return (dd1(x, y) - dd1(y, z)) / (x - z);
}

class SpectralModel {
public:
    SpectralModel(unsigned seed, int radial_a, int eprime)
        : radial_a_(radial_a), eprime_(eprime) {
        h_ = {-0.9, -0.15, 0.5, 1.2};
        for (int a = 0; a < NM; ++a) d_[a] = std::exp(h_[a]);
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        auto rand_mat = [&] {
            Mat m;
            for (auto& row : m)
                for (double& v : row) v = uni(rng);
            return m;
        };
        for (int j = 0; j < 3; ++j) l_[j] = rand_mat();
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) m_[i][j] = rand_mat();
    }

    double h(int a) const { return h_[a]; }
    double d(int a) const { return d_[a]; }
    int eprime() const { return eprime_; }
    const Mat& l(int j) const { return l_[j]; }

    // delta^alpha(k) for |alpha| in {1, 2}
    const Mat& dk(const MultiIndex& alpha) const {
        int i = 0;
        while (alpha[i] == 0) ++i;
        if (mi_order(alpha) == 1) return l_[i];
        int j = alpha[i] == 2 ? i : i + 1;
        while (alpha[j] == 0) ++j;
        return m_[i][j];
    }

    // delta^alpha(log k) in the eigenbasis of k
    Mat dlogk(const MultiIndex& alpha) const {
        int i = 0;
        while (alpha[i] == 0) ++i;
        Mat r{};
        if (mi_order(alpha) == 1) {
            for (int a = 0; a < NM; ++a)
                for (int b = 0; b < NM; ++b) r[a][b] = l_[i][a][b] * dd1(d_[a], d_[b]);
            return r;
        }
        int j = alpha[i] == 2 ? i : i + 1;
        while (alpha[j] == 0) ++j;
        for (int a = 0; a < NM; ++a)
            for (int b = 0; b < NM; ++b) {
                double v = m_[i][j][a][b] * dd1(d_[a], d_[b]);
                for (int c = 0; c < NM; ++c)
                    v += (l_[i][a][c] * l_[j][c][b] + l_[j][a][c] * l_[i][c][b]) *
                         dd2(d_[a], d_[c], d_[b]);
                r[a][b] = v;
            }
        return r;
    }

    // operand value of a u-independent atom
    Mat op_value(const Atom& at) const {
        Mat r{};
        switch (at.kind) {
            case AtomKind::KPow:
                for (int a = 0; a < NM; ++a) r[a][a] = std::pow(d_[a], at.r);
                return r;
            case AtomKind::DK:
                return dk(at.alpha);
            case AtomKind::UK: {
                Mat v = dk(at.alpha);
                for (int a = 0; a < NM; ++a)
                    for (int b = 0; b < NM; ++b) v[a][b] /= d_[a];
                return v;
            }
            case AtomKind::DLogK:
                return dlogk(at.alpha);
            default:
                throw std::logic_error("op_value: atom depends on u");
        }
    }

    // value of a radial word at fixed u, resolvent factors included
    Mat radial_value(const Word& w, double u) const {
        Mat r{};
        for (int a = 0; a < NM; ++a) r[a][a] = 1;
        for (const Atom& at : w) {
            if (at.kind == AtomKind::B0u) {
                Mat b{};
                for (int a = 0; a < NM; ++a)
                    b[a][a] = std::pow(u * std::pow(d_[a], radial_a_) + 1, -at.r);
                r = mat_mul(r, b);
            } else {
                r = mat_mul(r, op_value(at));
            }
        }
        return r;
    }

    // entrywise int_0^inf u^uexp (radial word) du
    Mat radial_integral(const Word& w, double uexp) const {
        Mat r;
        for (int a = 0; a < NM; ++a)
            for (int b = 0; b < NM; ++b)
                r[a][b] = integrate_half_line(
                    [&](double u) { return std::pow(u, uexp) * radial_value(w, u)[a][b]; },
                    1e-12);
        return r;
    }

    // path sum value of a spectral term: fn is evaluated at the modular logs
    // of the path and the prefix power at the leftmost spectral point
    Mat spectral_value(const SpectralTerm& t) const {
        const int len = static_cast<int>(t.w.size());
        std::vector<Mat> ops;
        ops.reserve(t.w.size());
        for (const Atom& at : t.w) ops.push_back(op_value(at));

        Mat out{};
        std::vector<int> idx(len + 1, 0);
        std::vector<double> s(len);
        for (;;) {
            double v = std::pow(d_[idx[0]], t.prefix);
            for (int p = 0; p < len && v != 0; ++p) v *= ops[p][idx[p]][idx[p + 1]];
            if (v != 0) {
                for (int p = 0; p < len; ++p) s[p] = eprime_ * (h_[idx[p + 1]] - h_[idx[p]]);
                out[idx[0]][idx[len]] += v * t.fn.eval(s);
            }
            int p = 0;
            while (p <= len && ++idx[p] == NM) idx[p++] = 0;
            if (p > len) break;
        }
        return out;
    }

private:
    int radial_a_;
    int eprime_;
    std::array<double, NM> h_;
    std::array<double, NM> d_;
    std::array<Mat, 3> l_;
    Mat m_[3][3];
};

} // namespace nct::testing
