#pragma once

// Parser for the compact ASCII notation the regression fixtures are written
// in, plus the comparison form used to diff engine output against them.
//
// One term per line, space-separated tokens:
//
//   -4 x1^5 x3 k^2 b0^2 d1(k2) b0^2 d3(k2) b0
//   +2 u^3 k^2 b0^2 d1(k) k^3 b0^2 k d1(k) b0
//
// The leading token is a rational coefficient.  x<j>[^p] collects a xi
// monomial, u[^p] a radial power (radial mode only), k[^r] a k power,
// b0[^m] a resolvent factor (B0 atoms in symbol mode, B0u in radial mode),
// d<j>(k) a first derivation, d<i>(d<j>(k)) a second one, and d<j>(k2)
// expands to the two-term derivation of k^2.
//
// Displays order the commuting k/b0 factors freely, so words are compared
// after sorting every maximal run of mergeable atoms into net KPow, B0, B0u;
// runs are faithful because k^a b0^m are linearly independent over (a, m).

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nct/rational.hpp"
#include "nct/reduce.hpp"
#include "nct/symbols.hpp"

namespace nct {

inline Word sorted_runs(const Word& w) {
    Word out;
    int kpow = 0, b0 = 0, b0u = 0;
    auto flush = [&] {
        if (kpow != 0) out.push_back(Atom::kpow(kpow));
        if (b0 != 0) out.push_back(Atom::b0(b0));
        if (b0u != 0) out.push_back(Atom::b0u(b0u));
        kpow = b0 = b0u = 0;
    };
    for (const Atom& a : w) {
        switch (a.kind) {
            case AtomKind::KPow: kpow += a.r; break;
            case AtomKind::B0: b0 += a.r; break;
            case AtomKind::B0u: b0u += a.r; break;
            default:
                flush();
                out.push_back(a);
        }
    }
    flush();
    return out;
}

inline SymbolExpr sorted_expr(const SymbolExpr& e) {
    SymbolExpr out;
    for (const auto& [t, c] : e.terms()) out.add(sorted_runs(t.w), t.xi, c);
    return out;
}

struct DisplayTerm {
    Coefficient coeff;
    XiMono xi{0, 0, 0};
    int upow = 0;
    SymbolExpr expr;   // coefficient folded in, xi and upow kept outside
};

namespace detail {

inline Rational parse_rational(const std::string& tok) {
    auto slash = tok.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(tok));
    return Rational(std::stoll(tok.substr(0, slash)),
                    std::stoll(tok.substr(slash + 1)));
}

// splits "name^p" into the name and an exponent defaulting to 1
inline std::pair<std::string, int> split_power(const std::string& tok) {
    auto caret = tok.find('^');
    if (caret == std::string::npos) return {tok, 1};
    return {tok.substr(0, caret), std::stoi(tok.substr(caret + 1))};
}

inline int parse_direction(char c) {
    if (c < '1' || c > '3') throw std::invalid_argument("bad direction");
    return c - '1';
}

}  // namespace detail

inline DisplayTerm parse_display_term(const std::string& line, bool radial) {
    std::istringstream in(line);
    std::string tok;
    if (!(in >> tok)) throw std::invalid_argument("empty display term");

    DisplayTerm out;
    out.coeff = Coefficient(detail::parse_rational(tok));
    out.expr = SymbolExpr::one();

    auto append = [&out](const SymbolExpr& f) { out.expr = out.expr * f; };

    while (in >> tok) {
        auto [head, power] = detail::split_power(tok);
        if (head == "u") {
            if (!radial)
                throw std::invalid_argument("u factor in symbol mode");
            out.upow += power;
        } else if (head == "k") {
            append(SymbolExpr::from_word({Atom::kpow(power)}));
        } else if (head == "b0") {
            append(SymbolExpr::from_word(
                {radial ? Atom::b0u(power) : Atom::b0(power)}));
        } else if (head.size() == 2 && head[0] == 'x') {
            out.xi[detail::parse_direction(head[1])] += power;
        } else if (head.size() == 5 && head[0] == 'd'
                   && head.compare(2, 3, "(k)") == 0) {
            int j = detail::parse_direction(head[1]);
            append(SymbolExpr::from_word({Atom::dk(j)}));
        } else if (head.size() == 6 && head[0] == 'd'
                   && head.compare(2, 4, "(k2)") == 0) {
            int j = detail::parse_direction(head[1]);
            SymbolExpr dk2 = SymbolExpr::from_word({Atom::dk(j), Atom::kpow(1)});
            dk2 += SymbolExpr::from_word({Atom::kpow(1), Atom::dk(j)});
            append(dk2);
        } else if (head.size() == 9 && head[0] == 'd'
                   && head.compare(2, 2, "(d") == 0
                   && head.compare(5, 4, "(k))") == 0) {
            MultiIndex a = mi_add(mi_unit(detail::parse_direction(head[1])),
                                  mi_unit(detail::parse_direction(head[4])));
            append(SymbolExpr::from_word({Atom::dk(a)}));
        } else {
            throw std::invalid_argument("bad display token: " + tok);
        }
    }
    out.expr = out.expr.scaled(out.coeff);
    return out;
}

// Symbol-mode displays compare as full expressions with xi kept per term.
inline SymbolExpr parse_display(const std::vector<std::string>& lines) {
    SymbolExpr sum;
    for (const std::string& line : lines) {
        DisplayTerm t = parse_display_term(line, false);
        for (const auto& [term, c] : t.expr.terms()) sum.add(term.w, t.xi, c);
    }
    return sum;
}

// Radial-mode displays and reduced engine output compare as maps keyed by
// the radial power and the run-sorted word.
using RadialKey = std::pair<int, Word>;
using RadialMap = std::map<RadialKey, Coefficient>;

namespace detail {

inline void radial_accumulate(RadialMap& m, const RadialKey& key,
                              const Coefficient& c) {
    auto [it, fresh] = m.try_emplace(key, c);
    if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) m.erase(it);
    }
}

}  // namespace detail

inline RadialMap parse_radial_display(const std::vector<std::string>& lines) {
    RadialMap out;
    for (const std::string& line : lines) {
        DisplayTerm t = parse_display_term(line, true);
        for (const auto& [term, c] : t.expr.terms())
            detail::radial_accumulate(out, {t.upow, sorted_runs(term.w)}, c);
    }
    return out;
}

inline RadialMap radial_map(const std::vector<RadialTerm>& terms,
                            const Coefficient& scale) {
    RadialMap out;
    for (const RadialTerm& t : terms) {
        int b0sum = 0;
        for (const Atom& a : t.w)
            if (a.kind == AtomKind::B0u) b0sum += a.r;
        detail::radial_accumulate(out, {b0sum - t.nu2 / 2, sorted_runs(t.w)},
                                  t.coeff * scale);
    }
    return out;
}

inline std::string radial_key_str(const RadialKey& k) {
    return "u^" + std::to_string(k.first) + " " + word_str(k.second);
}

// Itemised diff of two radial maps; empty means equal.
inline std::vector<std::string> diff_radial(const RadialMap& got,
                                            const RadialMap& want) {
    std::vector<std::string> out;
    for (const auto& [key, c] : want) {
        auto it = got.find(key);
        if (it == got.end())
            out.push_back("missing: " + c.str() + " " + radial_key_str(key));
        else if (!(it->second == c))
            out.push_back("coeff: " + radial_key_str(key) + " got "
                          + it->second.str() + " want " + c.str());
    }
    for (const auto& [key, c] : got)
        if (!want.count(key))
            out.push_back("extra: " + c.str() + " " + radial_key_str(key));
    return out;
}

// Itemised diff of two symbol expressions under the run-sorted form.
inline std::vector<std::string> diff_expr(const SymbolExpr& got,
                                          const SymbolExpr& want) {
    std::vector<std::string> out;
    const SymbolExpr gs = sorted_expr(got), ws = sorted_expr(want);
    for (const auto& [t, c] : ws.terms()) {
        auto it = gs.terms().find(t);
        if (it == gs.terms().end())
            out.push_back("missing: " + term_str(t, c));
        else if (!(it->second == c))
            out.push_back("coeff: " + term_str(t, c) + " got "
                          + it->second.str());
    }
    for (const auto& [t, c] : gs.terms())
        if (!ws.terms().count(t)) out.push_back("extra: " + term_str(t, c));
    return out;
}

}  // namespace nct
