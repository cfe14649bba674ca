#pragma once

// Word algebra for operator symbols on a noncommutative torus.
//
// A symbol is a finite sum of terms  c * xi^beta * w  where c is an exact
// Coefficient, xi^beta a monomial in the covariable, and w a word in a small
// set of atoms:
//
//   KPow(r)   k^r, integer power of the positive invertible element k
//   DK(a)     delta^a(k), first or second derivation of k (|a| in {1,2})
//   B0(m)     m-th power of the free resolvent factor (a2 + 1)^-1
//   B0u(m)    radial version of B0 after the fibre integral, a function of u
//   UK(a)     k^-1 delta^a(k), transient during spectral normalisation
//   DLogK(a)  delta^a(log k), the final generators of the output
//
// KPow, B0 and B0u are all functions of k, xi and u only, so they commute
// with each other in every representation; but a word never reorders them,
// because the derivation rules are only Leibniz-consistent on the free
// product (reorderings agree modulo the relation B0 (a2+1) = 1, which the
// word level does not impose; the faithful stages do).  Canonical form
// merely merges adjacent atoms of the same kind and drops zero powers.

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nct/rational.hpp"

namespace nct {

using MultiIndex = std::array<int, 3>;

inline int mi_order(const MultiIndex& a) { return a[0] + a[1] + a[2]; }

inline MultiIndex mi_unit(int j) {
    MultiIndex a{0, 0, 0};
    a[j] = 1;
    return a;
}

inline MultiIndex mi_add(const MultiIndex& a, const MultiIndex& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

enum class AtomKind : std::uint8_t { KPow, DK, B0, B0u, UK, DLogK };

struct Atom {
    AtomKind kind;
    int r = 0;                    // exponent for KPow, power for B0/B0u
    MultiIndex alpha{0, 0, 0};    // derivation multi-index for DK/UK/DLogK

    static Atom kpow(int r) { return {AtomKind::KPow, r, {0, 0, 0}}; }
    static Atom b0(int m) { return {AtomKind::B0, m, {0, 0, 0}}; }
    static Atom b0u(int m) { return {AtomKind::B0u, m, {0, 0, 0}}; }
    static Atom dk(const MultiIndex& a) { return {AtomKind::DK, 0, a}; }
    static Atom dk(int j) { return dk(mi_unit(j)); }
    static Atom uk(const MultiIndex& a) { return {AtomKind::UK, 0, a}; }
    static Atom dlogk(const MultiIndex& a) { return {AtomKind::DLogK, 0, a}; }

    friend bool operator==(const Atom& x, const Atom& y) {
        return x.kind == y.kind && x.r == y.r && x.alpha == y.alpha;
    }
    friend bool operator<(const Atom& x, const Atom& y) {
        if (x.kind != y.kind) return x.kind < y.kind;
        if (x.r != y.r) return x.r < y.r;
        return x.alpha < y.alpha;
    }
};

using Word = std::vector<Atom>;

// Canonical form: within every maximal run of commuting atoms keep a single
// KPow, then a single B0, then a single B0u, dropping zero powers.
inline bool mergeable(AtomKind k) {
    return k == AtomKind::KPow || k == AtomKind::B0 || k == AtomKind::B0u;
}

inline Word canonical_word(const Word& w) {
    Word out;
    for (const Atom& a : w) {
        if (mergeable(a.kind)) {
            if (a.r == 0) continue;
            if (!out.empty() && out.back().kind == a.kind) {
                out.back().r += a.r;
                if (out.back().r == 0) out.pop_back();
                continue;
            }
        }
        out.push_back(a);
    }
    return out;
}

inline Word word_concat(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return canonical_word(w);
}

using XiMono = std::array<int, 3>;

inline int xi_degree(const XiMono& x) { return x[0] + x[1] + x[2]; }

struct Term {
    Word w;
    XiMono xi{0, 0, 0};

    friend bool operator<(const Term& a, const Term& b) {
        if (a.xi != b.xi) return a.xi < b.xi;
        return a.w < b.w;
    }
    friend bool operator==(const Term& a, const Term& b) {
        return a.xi == b.xi && a.w == b.w;
    }
};

class SymbolExpr {
public:
    SymbolExpr() = default;

    static SymbolExpr one() {
        SymbolExpr e;
        e.add(Word{}, {0, 0, 0}, Coefficient(Rational(1)));
        return e;
    }
    static SymbolExpr from_word(Word w, Coefficient c = Coefficient(Rational(1))) {
        SymbolExpr e;
        e.add(std::move(w), {0, 0, 0}, c);
        return e;
    }

    void add(Word w, XiMono xi, Coefficient c) {
        if (c.is_zero()) return;
        Term t{canonical_word(w), xi};
        auto [it, inserted] = terms_.try_emplace(std::move(t), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    const std::map<Term, Coefficient>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    SymbolExpr& operator+=(const SymbolExpr& o) {
        for (const auto& [t, c] : o.terms_) add(t.w, t.xi, c);
        return *this;
    }
    friend SymbolExpr operator+(SymbolExpr a, const SymbolExpr& b) { return a += b; }

    SymbolExpr operator-() const {
        SymbolExpr e;
        for (const auto& [t, c] : terms_) e.terms_.emplace(t, -c);
        return e;
    }
    SymbolExpr& operator-=(const SymbolExpr& o) { return *this += -o; }
    friend SymbolExpr operator-(SymbolExpr a, const SymbolExpr& b) { return a -= b; }

    friend SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b) {
        SymbolExpr e;
        for (const auto& [ta, ca] : a.terms_)
            for (const auto& [tb, cb] : b.terms_) {
                XiMono xi{ta.xi[0] + tb.xi[0], ta.xi[1] + tb.xi[1], ta.xi[2] + tb.xi[2]};
                e.add(word_concat(ta.w, tb.w), xi, ca * cb);
            }
        return e;
    }

    SymbolExpr scaled(const Coefficient& c) const {
        SymbolExpr e;
        if (c.is_zero()) return e;
        for (const auto& [t, cc] : terms_) e.terms_.emplace(t, cc * c);
        return e;
    }

    // Restriction to the terms of given total degree in xi.
    SymbolExpr xi_part(int degree) const {
        SymbolExpr e;
        for (const auto& [t, c] : terms_)
            if (xi_degree(t.xi) == degree) e.terms_.emplace(t, c);
        return e;
    }

private:
    std::map<Term, Coefficient> terms_;
};

namespace detail {

// delta_j(k^r) expanded over the noncommutative power: for r > 0 the usual
// Leibniz sum, for r < 0 obtained from 0 = delta(k^r k^-r).
inline SymbolExpr delta_kpow(int j, int r) {
    SymbolExpr e;
    if (r > 0) {
        for (int i = 0; i < r; ++i) {
            Word w;
            if (i != 0) w.push_back(Atom::kpow(i));
            w.push_back(Atom::dk(j));
            if (r - 1 - i != 0) w.push_back(Atom::kpow(r - 1 - i));
            e.add(std::move(w), {0, 0, 0}, Coefficient(Rational(1)));
        }
    } else if (r < 0) {
        int n = -r;
        for (int i = 0; i < n; ++i) {
            Word w;
            w.push_back(Atom::kpow(i - n));
            w.push_back(Atom::dk(j));
            w.push_back(Atom::kpow(-1 - i));
            e.add(std::move(w), {0, 0, 0}, Coefficient(Rational(-1)));
        }
    }
    return e;
}

// delta_j of the principal part a2 = sum_l xi_l^2 k^c[l], needed whenever a
// derivation crosses a resolvent factor.
inline SymbolExpr delta_a2(int j, const std::array<int, 3>& c) {
    SymbolExpr e;
    for (int l = 0; l < 3; ++l) {
        if (c[l] == 0) continue;
        SymbolExpr dk = delta_kpow(j, c[l]);
        for (const auto& [t, coef] : dk.terms()) {
            XiMono xi{0, 0, 0};
            xi[l] = 2;
            e.add(t.w, xi, coef);
        }
    }
    return e;
}

} // namespace detail

// Applies the derivation delta_j atom by atom.  Words containing B0 need the
// exponent table c of the principal symbol, because delta_j(B0^m) expands
// into -sum_i B0^(i+1) delta_j(a2) B0^(m-i).
inline SymbolExpr delta(int j, const SymbolExpr& e, const std::array<int, 3>* c = nullptr) {
    SymbolExpr out;
    for (const auto& [t, coef] : e.terms()) {
        for (std::size_t p = 0; p < t.w.size(); ++p) {
            const Atom& a = t.w[p];
            Word left(t.w.begin(), t.w.begin() + p);
            Word right(t.w.begin() + p + 1, t.w.end());
            SymbolExpr middle;
            switch (a.kind) {
                case AtomKind::KPow:
                    middle = detail::delta_kpow(j, a.r);
                    break;
                case AtomKind::DK:
                    if (mi_order(a.alpha) >= 2)
                        throw std::logic_error("delta: third derivation of k is never needed");
                    middle = SymbolExpr::from_word({Atom::dk(mi_add(a.alpha, mi_unit(j)))});
                    break;
                case AtomKind::B0: {
                    if (!c)
                        throw std::logic_error("delta: B0 factor requires the principal exponents");
                    SymbolExpr da2 = detail::delta_a2(j, *c);
                    for (int i = 0; i < a.r; ++i) {
                        SymbolExpr piece = SymbolExpr::from_word({Atom::b0(i + 1)}) * da2 *
                                           SymbolExpr::from_word({Atom::b0(a.r - i)});
                        middle -= piece;
                    }
                    break;
                }
                default:
                    throw std::logic_error("delta: unexpected atom kind at this stage");
            }
            for (const auto& [tm, cm] : middle.terms()) {
                Word w = left;
                w.insert(w.end(), tm.w.begin(), tm.w.end());
                w.insert(w.end(), right.begin(), right.end());
                XiMono xi{t.xi[0] + tm.xi[0], t.xi[1] + tm.xi[1], t.xi[2] + tm.xi[2]};
                out.add(std::move(w), xi, coef * cm);
            }
        }
    }
    return out;
}

// Derivative in the covariable.  Only the explicit xi monomial and the
// resolvent factors depend on xi.
inline SymbolExpr xi_partial(int j, const SymbolExpr& e, const std::array<int, 3>& c) {
    SymbolExpr out;
    for (const auto& [t, coef] : e.terms()) {
        if (t.xi[j] > 0) {
            XiMono xi = t.xi;
            xi[j] -= 1;
            out.add(t.w, xi, coef * Coefficient(Rational(t.xi[j])));
        }
        // d/dxi_j (b0) = -b0 d/dxi_j(a2) b0 = -2 xi_j b0 k^{c_j} b0, applied
        // once per factor of a b0 power; the k power stays sandwiched so the
        // rule agrees with itself when a power splits across a product
        for (std::size_t p = 0; p < t.w.size(); ++p) {
            const Atom& a = t.w[p];
            if (a.kind != AtomKind::B0) continue;
            XiMono xi = t.xi;
            xi[j] += 1;
            for (int i = 0; i < a.r; ++i) {
                Word w(t.w.begin(), t.w.begin() + p);
                w.push_back(Atom::b0(i + 1));
                if (c[j] != 0) w.push_back(Atom::kpow(c[j]));
                w.push_back(Atom::b0(a.r - i));
                w.insert(w.end(), t.w.begin() + p + 1, t.w.end());
                out.add(std::move(w), xi, coef * Coefficient(Rational(-2)));
            }
        }
    }
    return out;
}

// Diagnostics: compact ASCII rendering of words and terms, e.g.
// "k^2 b0^2 d1(k) k^3 b0 d1d3(k)".  Directions print 1-based.
inline std::string atom_str(const Atom& a) {
    auto didx = [](const MultiIndex& m) {
        std::string s;
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < m[j]; ++i) s += "d" + std::to_string(j + 1);
        return s;
    };
    switch (a.kind) {
        case AtomKind::KPow:
            return a.r == 1 ? "k" : "k^" + std::to_string(a.r);
        case AtomKind::B0:
        case AtomKind::B0u:
            return a.r == 1 ? "b0" : "b0^" + std::to_string(a.r);
        case AtomKind::DK:
            return didx(a.alpha) + "(k)";
        case AtomKind::UK:
            return "[k^-1 " + didx(a.alpha) + "(k)]";
        case AtomKind::DLogK:
            return didx(a.alpha) + "(logk)";
    }
    return "?";
}

inline std::string word_str(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += " ";
        s += atom_str(w[i]);
    }
    return s;
}

inline std::string term_str(const Term& t, const Coefficient& c) {
    std::string s = c.str();
    for (int j = 0; j < 3; ++j) {
        if (t.xi[j] == 0) continue;
        s += " x" + std::to_string(j + 1);
        if (t.xi[j] != 1) s += "^" + std::to_string(t.xi[j]);
    }
    if (!t.w.empty()) s += " " + word_str(t.w);
    return s;
}

inline std::string expr_str(const SymbolExpr& e) {
    if (e.is_zero()) return "0";
    std::string s;
    for (const auto& [t, c] : e.terms()) {
        if (!s.empty()) s += "  +  ";
        s += term_str(t, c);
    }
    return s;
}

} // namespace nct
