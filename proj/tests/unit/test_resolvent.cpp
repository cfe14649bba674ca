#include <catch2/catch_amalgamated.hpp>

#include "nct/metric.hpp"
#include "nct/polycheck.hpp"
#include "nct/resolvent.hpp"

using namespace nct;

namespace {

int derivation_order(const Word& w) {
    int n = 0;
    for (const Atom& a : w)
        if (a.kind == AtomKind::DK) n += mi_order(a.alpha);
    return n;
}

bool b0_bounded(const Word& w) {
    return !w.empty() && w.front().kind == AtomKind::B0 && w.back().kind == AtomKind::B0;
}

} // namespace

TEST_CASE("parametrix grading and structure", "[resolvent]") {
    for (const MetricDescriptor& m :
         {metric_conformal3(), metric_nonconformal3(), metric_conformal2()}) {
        INFO(m.name);
        auto p = parametrix_scalar(m.laplace0, m);
        CHECK(homogeneous(p.b1[0][0], 1));
        CHECK(homogeneous(p.b2[0][0], 2));
        CHECK(p.b2[0][0].size() > 0);
        for (const auto& [t, c] : p.b2[0][0].terms()) {
            (void)c;
            CHECK(derivation_order(t.w) == 2);
            CHECK(b0_bounded(t.w));
        }
    }
}

TEST_CASE("flat torus has vanishing corrections", "[resolvent]") {
    auto p = parametrix_scalar(metric_flat3().laplace0, metric_flat3());
    CHECK(p.b1[0][0].is_zero());
    CHECK(p.b2[0][0].is_zero());
}

TEST_CASE("parametrix identity holds exactly, scalar case", "[resolvent]") {
    for (const MetricDescriptor& m :
         {metric_conformal3(), metric_nonconformal3(), metric_conformal2(), metric_flat3()}) {
        INFO(m.name);
        auto p = parametrix_scalar(m.laplace0, m);
        for (int grade = 0; grade <= 2; ++grade) {
            INFO("grade " << grade);
            auto res = parametrix_residue(p, m, grade);
            CHECK(poly_zero(res[0][0], m));
        }
    }
}

TEST_CASE("parametrix identity holds exactly, one-form case", "[resolvent]") {
    for (const MetricDescriptor& m : {metric_conformal3(), metric_nonconformal3()}) {
        INFO(m.name);
        auto p = parametrix<3>(m.laplace1, m);
        for (int grade = 0; grade <= 2; ++grade) {
            auto res = parametrix_residue(p, m, grade);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    INFO("grade " << grade << " entry " << i << j);
                    CHECK(poly_zero(res[i][j], m));
                }
        }
    }
}

TEST_CASE("polynomial check rejects perturbations", "[resolvent]") {
    MetricDescriptor m = metric_conformal3();
    auto p = parametrix_scalar(m.laplace0, m);
    auto res = parametrix_residue(p, m, 2);
    SymbolExpr bad = res[0][0];
    bad.add({Atom::b0(1), Atom::dk(0), Atom::dk(1), Atom::b0(2)}, {0, 0, 0},
            Coefficient(Rational(1, 1000000)));
    CHECK_FALSE(poly_zero(bad, m));

    // moving a k power across a derivation atom must also be caught
    SymbolExpr moved = res[0][0];
    moved.add({Atom::kpow(1), Atom::dk(0), Atom::b0(1)}, {1, 0, 0}, Coefficient(Rational(1)));
    moved.add({Atom::dk(0), Atom::kpow(1), Atom::b0(1)}, {1, 0, 0}, Coefficient(Rational(-1)));
    CHECK_FALSE(poly_zero(moved, m));
}

TEST_CASE("one-form principal symbol is scalar", "[resolvent]") {
    for (const MetricDescriptor& m : {metric_conformal3(), metric_nonconformal3()}) {
        auto p = parametrix<3>(m.laplace1, m);
        SymbolExpr scalar_a2 = parametrix_scalar(m.laplace0, m).a2;
        CHECK((p.a2 - scalar_a2).is_zero());
    }
}
