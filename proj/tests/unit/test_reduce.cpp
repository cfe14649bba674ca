#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "nct/fspec.hpp"
#include "nct/metric.hpp"
#include "nct/quadrature.hpp"
#include "nct/reduce.hpp"
#include "nct/resolvent.hpp"

using namespace nct;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// arbitrary but fixed scalar stand-in for a derivation atom
double dkval(const MultiIndex& a) {
    return 0.4 + 0.3 * a[0] + 0.2 * a[1] + 0.15 * a[2] + (mi_order(a) == 2 ? 0.37 : 0.0);
}

// scalar value of a word with k = t and every resolvent factor (barg + 1)^-r
double word_factor(const Word& w, double t, double barg) {
    double v = 1;
    for (const Atom& a : w) {
        switch (a.kind) {
            case AtomKind::KPow: v *= std::pow(t, a.r); break;
            case AtomKind::DK: v *= dkval(a.alpha); break;
            case AtomKind::B0:
            case AtomKind::B0u: v *= std::pow(barg + 1, -a.r); break;
            default: throw std::logic_error("word_factor: unexpected atom");
        }
    }
    return v;
}

// fixed half-line rule: two 30 point Gauss pieces under u = w^2, good to
// machine precision on the smooth decaying integrands below and cheap
// enough to tensor over three coordinates
struct QNode {
    double u, w;
};
const std::vector<QNode>& half_line_rule() {
    static const std::vector<QNode> rule = [] {
        std::vector<QNode> v;
        const GaussRule& g = gauss_rule(30);
        for (int i = 0; i < 30; ++i) {
            double x = 0.5 * (1 + g.x[i]), w = 0.5 * g.w[i];
            v.push_back({x * x, 2 * x * w});
            v.push_back({1 / (x * x), 2 / (x * x * x) * w});
        }
        return v;
    }();
    return rule;
}

// brute force integral of the scalar-evaluated symbol over the covariable,
// in polar coordinates: equally spaced angles are exact for the trigonometric
// monomials, the polar cosine is a smooth Gauss integral, and the radial
// decay is one dimensional, where the mapped rule converges spectrally
double direct_integral(const SymbolExpr& e, const MetricDescriptor& m, double t) {
    const auto& rrule = half_line_rule();
    const GaussRule& mu = gauss_rule(31);
    const int nt = 64;
    const double wt = 2 * M_PI / nt;
    double total = 0;
    for (const auto& [term, c] : e.terms()) {
        if (term.xi[0] % 2 || term.xi[1] % 2 || term.xi[2] % 2) continue;
        int deg = xi_degree(term.xi);
        double sum = 0;
        auto shell = [&](std::array<double, 3> omega, double wang) {
            double ang = 1, cc = 0;
            for (int l = 0; l < m.dim; ++l) {
                ang *= std::pow(omega[l], term.xi[l]);
                cc += omega[l] * omega[l] * std::pow(t, m.c[l]);
            }
            if (ang == 0 && deg > 0) return;
            for (const QNode& rn : rrule)
                sum += wang * rn.w * std::pow(rn.u, m.dim - 1 + deg) * ang *
                       word_factor(term.w, t, rn.u * rn.u * cc);
        };
        for (int it = 0; it < nt; ++it) {
            double th = wt * it;
            if (m.dim == 3) {
                for (std::size_t im = 0; im < mu.x.size(); ++im) {
                    double z = mu.x[im], s = std::sqrt(1 - z * z);
                    shell({s * std::cos(th), s * std::sin(th), z}, wt * mu.w[im]);
                }
            } else {
                shell({std::cos(th), std::sin(th), 0}, wt);
            }
        }
        total += c.to_double() * sum;
    }
    return total;
}

// scalar value of the reduced radial family at the same k = t
double radial_value(const std::vector<RadialTerm>& rts, const MetricDescriptor& m, double t) {
    double total = 0;
    for (const RadialTerm& rt : rts) {
        int msum = 0;
        for (const Atom& a : rt.w)
            if (a.kind == AtomKind::B0u) msum += a.r;
        double uexp = msum - 0.5 * rt.nu2;
        double ti = integrate_half_line(
            [&](double u) {
                return std::pow(u, uexp) *
                       word_factor(rt.w, t, u * std::pow(t, m.radial_a));
            },
            1e-11);
        total += rt.coeff.to_double() * ti;
    }
    return total;
}

SymbolExpr test_expr(bool third_direction) {
    SymbolExpr e;
    e.add({Atom::b0(2)}, {0, 0, 0}, Coefficient(Rational(1)));
    e.add({Atom::kpow(1), Atom::b0(2), Atom::dk(1), Atom::b0(1)}, {2, 0, 0},
          Coefficient(Rational(3, 2)));
    e.add({Atom::b0(3), Atom::kpow(2), Atom::b0(1)}, {4, 0, 0}, Coefficient(Rational(-2, 3)));
    if (third_direction)
        e.add({Atom::kpow(-2), Atom::b0(3), Atom::dk(MultiIndex{1, 0, 1}), Atom::b0(1)},
              {0, 2, 2}, Coefficient(Rational(5, 4)));
    else
        e.add({Atom::kpow(-2), Atom::b0(3), Atom::dk(MultiIndex{1, 1, 0}), Atom::b0(1)},
              {0, 2, 0}, Coefficient(Rational(5, 4)));
    return e;
}

} // namespace

TEST_CASE("radial integral family: members with elementary values", "[reduce]") {
    // int_0^inf u^(1/2) (u+1)^-2 du = B(3/2, 1/2) = pi/2
    FSpec a{3, Rational(2, 3), {{{0}, 1}, {{}, 1}}};
    CHECK_THAT(fspec_eval(a, {0.0}), WithinRel(M_PI / 2, 1e-10));

    // int_0^inf u^(-1/2) (u X + 1)^-1 du = pi / sqrt(X)
    FSpec b{3, Rational(2, 3), {{{0}, 1}}};
    CHECK_THAT(fspec_eval(b, {0.0}), WithinRel(M_PI, 1e-10));
    CHECK_THAT(fspec_eval(b, {0.9}), WithinRel(M_PI * std::exp(-0.3), 1e-10));
    CHECK_THAT(fspec_eval(b, {-1.2}), WithinRel(M_PI * std::exp(0.4), 1e-10));

    // int_0^inf (u+1)^-1 (2u+1)^-1 du = log 2
    FSpec c{4, Rational(1), {{{}, 1}, {{0}, 1}}};
    CHECK_THAT(fspec_eval(c, {std::log(2.0)}), WithinRel(std::log(2.0), 1e-10));

    // int_0^inf (u+1)^-3 du = 1/2
    FSpec d{6, Rational(1), {{{}, 2}, {{0}, 1}}};
    CHECK_THAT(fspec_eval(d, {0.0}), WithinRel(0.5, 1e-10));

    // weight too large or too small for convergence
    FSpec bad1{4, Rational(1), {{{}, 1}}};
    CHECK_THROWS_AS(fspec_eval(bad1, {}), std::domain_error);
    FSpec bad2{2, Rational(1), {{{}, 2}}};
    CHECK_THROWS_AS(fspec_eval(bad2, {}), std::domain_error);
}

TEST_CASE("modular generating functions f and g", "[reduce]") {
    for (int ep : {2, 3, 6}) {
        CHECK_THAT(f_eval(ep, 0.0), WithinRel(1.0, 1e-12));
        for (double s : {-0.8, 0.9, 1.7}) {
            double c = s / ep;
            CHECK_THAT(f_eval(ep, s), WithinRel((std::exp(c) - 1) / c, 1e-12));
            // g(x, 1) = int_0^1 a x^(a/e') da, x the outer argument
            CHECK_THAT(g_eval(ep, s, 0.0),
                       WithinRel((std::exp(c) * (c - 1) + 1) / (c * c), 1e-12));
        }
        CHECK_THAT(g_eval(ep, 0.0, 0.0), WithinRel(0.5, 1e-12));
        // splitting the unit square along the diagonal
        for (double sx : {-1.1, 0.7})
            for (double sy : {-0.4, 1.3})
                CHECK_THAT(g_eval(ep, sx, sy) + g_eval(ep, sy, sx),
                           WithinRel(f_eval(ep, sx) * f_eval(ep, sy), 1e-12));
    }
}

TEST_CASE("fibre reduction matches the direct covariable integral", "[reduce]") {
    struct Route {
        MetricDescriptor m;
        bool third;
    };
    const Route routes[] = {{metric_conformal3(), true},
                            {metric_nonconformal3(), true},
                            {metric_conformal2(), false}};
    for (const Route& r : routes) {
        SymbolExpr e = test_expr(r.third);
        auto rts = reduce(e, r.m);
        REQUIRE(!rts.empty());
        for (double t : {0.8, 1.3}) {
            double lhs = radial_value(rts, r.m, t);
            double rhs = r.m.prefactor.to_double() * direct_integral(e, r.m, t);
            INFO(r.m.name << " at t = " << t);
            CHECK_THAT(lhs, WithinRel(rhs, 1e-6));
        }
    }
}

TEST_CASE("reduction of the second parametrix coefficient", "[reduce]") {
    {
        auto m = metric_conformal3();
        auto rts = reduce(parametrix_scalar(m.laplace0, m).b2[0][0], m);
        REQUIRE(!rts.empty());
        for (const RadialTerm& rt : rts) {
            CHECK(rt.nu2 == 3);
            CHECK(rt.coeff.pi_half() == -5);
        }
    }
    {
        auto m = metric_nonconformal3();
        auto rts = reduce(parametrix_scalar(m.laplace0, m).b2[0][0], m);
        REQUIRE(!rts.empty());
        for (const RadialTerm& rt : rts) {
            CHECK(rt.nu2 % 2 == 0);
            CHECK(rt.nu2 >= 4);
            CHECK(rt.coeff.pi_half() == -3);
        }
    }
    {
        auto m = metric_conformal2();
        auto rts = reduce(parametrix_scalar(m.laplace0, m).b2[0][0], m);
        REQUIRE(!rts.empty());
        for (const RadialTerm& rt : rts) {
            CHECK(rt.nu2 == 4);
            CHECK(rt.coeff.pi_half() == -4);
        }
    }
    {
        auto m = metric_flat3();
        CHECK(reduce(parametrix_scalar(m.laplace0, m).b2[0][0], m).empty());
    }
}

TEST_CASE("reduction rejects what it cannot integrate", "[reduce]") {
    // third covariable direction on the two dimensional fibre
    SymbolExpr e;
    e.add({Atom::b0(2)}, {0, 0, 2}, Coefficient(Rational(1)));
    CHECK_THROWS_AS(reduce(e, metric_conformal2()), std::logic_error);

    // eta integral diverges when the resolvent power is too low
    SymbolExpr f;
    f.add({Atom::b0(1)}, {0, 0, 0}, Coefficient(Rational(1)));
    CHECK_THROWS_AS(reduce(f, metric_nonconformal3()), std::logic_error);

    // words past the symbol stage are refused
    SymbolExpr g;
    g.add({Atom::b0u(2)}, {0, 0, 0}, Coefficient(Rational(1)));
    CHECK_THROWS_AS(reduce(g, metric_conformal3()), std::logic_error);
}
