#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nct/metric.hpp"
#include "nct/symbols.hpp"

using namespace nct;

namespace {

const std::array<int, 3> C3 = {4, 4, 4};   // conformal 3-torus principal exponents

SymbolExpr word(std::initializer_list<Atom> atoms, Coefficient c = Coefficient(Rational(1))) {
    return SymbolExpr::from_word(Word(atoms), c);
}

// Random symbol expressions over a small atom alphabet, rich enough to
// exercise every derivation rule.
SymbolExpr random_expr(std::mt19937& rng, bool with_dk) {
    std::uniform_int_distribution<int> nterms(1, 3), nat(0, 3), pick(0, with_dk ? 3 : 2);
    std::uniform_int_distribution<int> kpow(-2, 2), b0pow(1, 2), dir(0, 2), xi(0, 2);
    SymbolExpr e;
    for (int t = 0; t < nterms(rng); ++t) {
        Word w;
        for (int i = 0; i < nat(rng); ++i) {
            switch (pick(rng)) {
                case 0: w.push_back(Atom::kpow(kpow(rng))); break;
                case 1: w.push_back(Atom::b0(b0pow(rng))); break;
                case 2: w.push_back(Atom::kpow(1)); break;
                default: w.push_back(Atom::dk(dir(rng)));
            }
        }
        e.add(std::move(w), {xi(rng), xi(rng), 0}, Coefficient(Rational(1 + t, 2)));
    }
    return e;
}

} // namespace

TEST_CASE("canonical form merges adjacent atoms of one kind", "[symbols]") {
    Word w{Atom::kpow(2), Atom::b0(1), Atom::kpow(3), Atom::dk(0), Atom::kpow(1), Atom::kpow(-1)};
    Word c = canonical_word(w);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == Atom::kpow(2));
    CHECK(c[1] == Atom::b0(1));
    CHECK(c[2] == Atom::kpow(3));
    CHECK(c[3] == Atom::dk(0));

    CHECK(canonical_word({Atom::kpow(2), Atom::kpow(-2)}).empty());
    CHECK(canonical_word({Atom::b0(2), Atom::b0(-1)}) == Word{Atom::b0(1)});
    // cancellation exposes a new same-kind neighbour, which merges too
    CHECK(canonical_word({Atom::b0(1), Atom::kpow(2), Atom::kpow(-2), Atom::b0(1)}) ==
          Word{Atom::b0(2)});
    // functions of k and the resolvent factor commute in every representation,
    // but words never reorder them: the derivation rules are Leibniz-consistent
    // only on the free product
    CHECK(canonical_word({Atom::b0(1), Atom::kpow(2)}) !=
          canonical_word({Atom::kpow(2), Atom::b0(1)}));
}

TEST_CASE("derivation of k powers", "[symbols]") {
    SymbolExpr dk2 = delta(2, word({Atom::kpow(2)}));
    SymbolExpr expect = word({Atom::dk(2), Atom::kpow(1)}) + word({Atom::kpow(1), Atom::dk(2)});
    CHECK((dk2 - expect).is_zero());

    SymbolExpr dkm1 = delta(0, word({Atom::kpow(-1)}));
    SymbolExpr em1 = word({Atom::kpow(-1), Atom::dk(0), Atom::kpow(-1)},
                          Coefficient(Rational(-1)));
    CHECK((dkm1 - em1).is_zero());

    SymbolExpr dkm2 = delta(0, word({Atom::kpow(-2)}));
    SymbolExpr em2 = word({Atom::kpow(-2), Atom::dk(0), Atom::kpow(-1)},
                          Coefficient(Rational(-1))) +
                     word({Atom::kpow(-1), Atom::dk(0), Atom::kpow(-2)},
                          Coefficient(Rational(-1)));
    CHECK((dkm2 - em2).is_zero());

    // delta(k) of a first derivation bumps the multi-index; a second one throws
    SymbolExpr ddk = delta(1, word({Atom::dk(0)}));
    CHECK((ddk - word({Atom::dk(MultiIndex{1, 1, 0})})).is_zero());
    CHECK_THROWS_AS(delta(2, word({Atom::dk(MultiIndex{1, 1, 0})})), std::logic_error);
}

TEST_CASE("derivation of the resolvent factor", "[symbols]") {
    // delta_j(B0) = -B0 delta_j(a2) B0
    SymbolExpr db0 = delta(0, word({Atom::b0(1)}), &C3);
    SymbolExpr expect;
    for (int l = 0; l < 3; ++l) {
        XiMono xi{0, 0, 0};
        xi[l] = 2;
        for (int i = 0; i < 4; ++i) {
            Word w{Atom::b0(1), Atom::kpow(i), Atom::dk(0), Atom::kpow(3 - i), Atom::b0(1)};
            expect.add(std::move(w), xi, Coefficient(Rational(-1)));
        }
    }
    CHECK((db0 - expect).is_zero());
    CHECK_THROWS_AS(delta(0, word({Atom::b0(1)})), std::logic_error);
}

TEST_CASE("covariable derivative", "[symbols]") {
    // d/dxi_2 (xi_2^2 B0) = 2 xi_2 B0 - 2 xi_2^3 B0 k^4 B0
    SymbolExpr e;
    e.add({Atom::b0(1)}, {0, 0, 2}, Coefficient(Rational(1)));
    SymbolExpr got = xi_partial(2, e, C3);
    SymbolExpr expect;
    expect.add({Atom::b0(1)}, {0, 0, 1}, Coefficient(Rational(2)));
    expect.add({Atom::b0(1), Atom::kpow(4), Atom::b0(1)}, {0, 0, 3}, Coefficient(Rational(-2)));
    CHECK((got - expect).is_zero());

    // principal exponent zero: no k power appears
    SymbolExpr flat = xi_partial(2, word({Atom::b0(1)}), {2, 2, 0});
    SymbolExpr fexp;
    fexp.add({Atom::b0(2)}, {0, 0, 1}, Coefficient(Rational(-2)));
    CHECK((flat - fexp).is_zero());
}

TEST_CASE("derivations satisfy the Leibniz rule", "[symbols]") {
    std::mt19937 rng(12345);
    for (int rep = 0; rep < 200; ++rep) {
        SymbolExpr a = random_expr(rng, true);
        SymbolExpr b = random_expr(rng, false);
        int j = static_cast<int>(rng() % 3);
        SymbolExpr lhs = delta(j, a * b, &C3);
        SymbolExpr rhs = delta(j, a, &C3) * b + a * delta(j, b, &C3);
        REQUIRE((lhs - rhs).is_zero());
    }
}

TEST_CASE("covariable derivative satisfies the Leibniz rule", "[symbols]") {
    std::mt19937 rng(777);
    for (int rep = 0; rep < 200; ++rep) {
        SymbolExpr a = random_expr(rng, true);
        SymbolExpr b = random_expr(rng, true);
        int j = static_cast<int>(rng() % 3);
        SymbolExpr lhs = xi_partial(j, a * b, C3);
        SymbolExpr rhs = xi_partial(j, a, C3) * b + a * xi_partial(j, b, C3);
        REQUIRE((lhs - rhs).is_zero());
    }
}

TEST_CASE("derivations commute", "[symbols]") {
    std::mt19937 rng(999);
    for (int rep = 0; rep < 100; ++rep) {
        SymbolExpr a = random_expr(rng, false);   // keep derivation order below three
        int i = static_cast<int>(rng() % 3), j = static_cast<int>(rng() % 3);
        SymbolExpr lhs = delta(i, delta(j, a, &C3), &C3);
        SymbolExpr rhs = delta(j, delta(i, a, &C3), &C3);
        REQUIRE((lhs - rhs).is_zero());
        SymbolExpr xl = xi_partial(i, xi_partial(j, a, C3), C3);
        SymbolExpr xr = xi_partial(j, xi_partial(i, a, C3), C3);
        REQUIRE((xl - xr).is_zero());
    }
}

TEST_CASE("operator symbols", "[symbols]") {
    // sigma(delta_j k^2 delta_j) = xi_j^2 k^2 + xi_j delta_j(k^2)
    Operator op{{Rational(1), {OpToken::d(1), OpToken::k(2), OpToken::d(1)}}};
    SymbolExpr full = operator_symbol(op);
    SymbolExpr a2 = full.xi_part(2), a1 = full.xi_part(1), a0 = full.xi_part(0);
    SymbolExpr e2;
    e2.add({Atom::kpow(2)}, {0, 2, 0}, Coefficient(Rational(1)));
    CHECK((a2 - e2).is_zero());
    SymbolExpr e1;
    e1.add({Atom::dk(1), Atom::kpow(1)}, {0, 1, 0}, Coefficient(Rational(1)));
    e1.add({Atom::kpow(1), Atom::dk(1)}, {0, 1, 0}, Coefficient(Rational(1)));
    CHECK((a1 - e1).is_zero());
    CHECK(a0.is_zero());

    // one summand of the conformal 3-torus function operator, by hand:
    // sigma(k^3 delta_j k^-2 delta_j k^3) has principal part k^4 xi_j^2 and
    // subprincipal part (k delta(k) k^2 + k^2 delta(k) k + 2 k^3 delta(k)) xi_j
    Operator c3{{Rational(1),
                 {OpToken::k(3), OpToken::d(0), OpToken::k(-2), OpToken::d(0), OpToken::k(3)}}};
    SymbolExpr cf = operator_symbol(c3);
    SymbolExpr ca2;
    ca2.add({Atom::kpow(4)}, {2, 0, 0}, Coefficient(Rational(1)));
    CHECK((cf.xi_part(2) - ca2).is_zero());
    SymbolExpr ca1;
    ca1.add({Atom::kpow(1), Atom::dk(0), Atom::kpow(2)}, {1, 0, 0}, Coefficient(Rational(1)));
    ca1.add({Atom::kpow(2), Atom::dk(0), Atom::kpow(1)}, {1, 0, 0}, Coefficient(Rational(1)));
    ca1.add({Atom::kpow(3), Atom::dk(0)}, {1, 0, 0}, Coefficient(Rational(2)));
    CHECK((cf.xi_part(1) - ca1).is_zero());

    for (const MetricDescriptor& m :
         {metric_conformal3(), metric_nonconformal3(), metric_conformal2()}) {
        SymbolExpr top = operator_symbol(m.laplace0).xi_part(2);
        SymbolExpr want;
        for (int l = 0; l < m.dim; ++l) {
            XiMono xi{0, 0, 0};
            xi[l] = 2;
            Word w;
            if (m.c[l] != 0) w.push_back(Atom::kpow(m.c[l]));
            want.add(std::move(w), xi, Coefficient(Rational(1)));
        }
        INFO(m.name);
        CHECK((top - want).is_zero());
    }
}
