#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "../support/matrix_model.hpp"
#include "nct/metric.hpp"
#include "nct/reduce.hpp"
#include "nct/spectral.hpp"
#include "nct/translate.hpp"

using namespace nct;
using nct::testing::Mat;
using nct::testing::SpectralModel;
using Catch::Matchers::WithinAbs;

namespace {

void check_mats(const Mat& a, const Mat& b, double tol) {
    double scale = 1;
    for (const auto& row : b)
        for (double v : row) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < nct::testing::NM; ++i)
        for (int j = 0; j < nct::testing::NM; ++j) {
            INFO("entry " << i << "," << j);
            CHECK_THAT(a[i][j], WithinAbs(b[i][j], tol * scale));
        }
}

Mat scale_mat(Mat m, double c) {
    for (auto& row : m)
        for (double& v : row) v *= c;
    return m;
}

// value of the sum of the translated terms by path summation
Mat translated_value(const SpectralModel& model, const std::vector<SpectralTerm>& ts) {
    Mat acc = nct::testing::mat_zero();
    for (const SpectralTerm& t : ts) {
        Mat v = model.spectral_value(t);
        for (int i = 0; i < nct::testing::NM; ++i)
            for (int j = 0; j < nct::testing::NM; ++j) acc[i][j] += v[i][j];
    }
    return acc;
}

} // namespace

TEST_CASE("operand extraction and slot bookkeeping", "[spectral]") {
    auto m = metric_conformal3();
    RadialTerm rt{Coefficient(Rational(1)), 3,
                  {Atom::kpow(2), Atom::b0u(2), Atom::dk(0), Atom::b0u(1)}};
    SpectralTerm t = to_spectral(rt, m);

    REQUIRE(t.w.size() == 2);
    CHECK(t.w[0] == Atom::kpow(2));
    CHECK(t.w[1] == Atom::dk(0));
    CHECK(t.prefix == -10);
    CHECK(t.fn.eprime == 6);
    CHECK(t.fn.fspec.nu2 == 3);
    CHECK(t.fn.fspec.slot_exp == Rational(2, 3));
    REQUIRE(t.fn.fspec.slots.size() == 2);
    CHECK(t.fn.fspec.slots[0].vars == std::vector<int>{0});
    CHECK(t.fn.fspec.slots[0].m == 2);
    CHECK(t.fn.fspec.slots[1].vars == (std::vector<int>{0, 1}));
    CHECK(t.fn.fspec.slots[1].m == 1);
    CHECK(spectral_k_degree(t) == -7);

    normalize_spectral(t);
    REQUIRE(t.w.size() == 1);
    CHECK(t.w[0] == Atom::uk(mi_unit(0)));
    CHECK(t.prefix == -7);
    CHECK(spectral_k_degree(t) == -7);
    REQUIRE(t.fn.powers.size() == 1);
    CHECK(t.fn.powers[0] == Rational(0));
    REQUIRE(t.fn.fspec.slots.size() == 2);
    CHECK(t.fn.fspec.slots[0].vars.empty());
    CHECK(t.fn.fspec.slots[0].m == 2);
    CHECK(t.fn.fspec.slots[1].vars == std::vector<int>{0});
    CHECK(t.fn.fspec.slots[1].m == 1);
}

TEST_CASE("total k degree is preserved through normalisation", "[spectral]") {
    auto m = metric_nonconformal3();
    std::mt19937 rng(4242);
    for (int rep = 0; rep < 60; ++rep) {
        Word w;
        int pieces = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < pieces; ++i) {
            switch (rng() % 3) {
                case 0: w.push_back(Atom::kpow(static_cast<int>(rng() % 5) - 2)); break;
                case 1: w.push_back(Atom::b0u(1 + static_cast<int>(rng() % 2))); break;
                default: w.push_back(Atom::dk(static_cast<int>(rng() % 3)));
            }
        }
        w.push_back(Atom::b0u(2));   // keep the radial integral convergent
        RadialTerm rt{Coefficient(Rational(1)), 4, canonical_word(w)};
        SpectralTerm t = to_spectral(rt, m);
        int deg = spectral_k_degree(t);
        normalize_spectral(t);
        CHECK(spectral_k_degree(t) == deg);
        for (const Atom& a : t.w) CHECK(a.kind == AtomKind::UK);
    }
}

TEST_CASE("rewriting second derivations of log k", "[spectral]") {
    SpectralTerm t;
    t.w = {Atom::uk(MultiIndex{1, 0, 1})};
    t.prefix = 2;
    t.fn.coeff = Coefficient(Rational(1, 4));
    t.fn.powers = {Rational(1, 2)};
    t.fn.eprime = 6;
    t.fn.has_fspec = true;
    t.fn.fspec = FSpec{3, Rational(2, 3), {{{0}, 2}}};

    auto out = translate(t);
    REQUIRE(out.size() == 3);

    CHECK(out[0].w == Word{Atom::dlogk(MultiIndex{1, 0, 1})});
    REQUIRE(out[0].fn.leaves.size() == 1);
    CHECK(!out[0].fn.leaves[0].is_g);
    CHECK(out[0].fn.leaves[0].v1 == 0);
    CHECK(out[0].fn.coeff.rat() == Rational(1, 4));

    for (int i : {1, 2}) {
        REQUIRE(out[i].w.size() == 2);
        CHECK(out[i].prefix == 2);
        REQUIRE(out[i].fn.powers.size() == 2);
        CHECK(out[i].fn.powers[0] == Rational(1, 2));
        CHECK(out[i].fn.powers[1] == Rational(1, 2));
        REQUIRE(out[i].fn.leaves.size() == 1);
        CHECK(out[i].fn.leaves[0].is_g);
        CHECK(out[i].fn.leaves[0].v1 == 0);
        CHECK(out[i].fn.leaves[0].v2 == 1);
        REQUIRE(out[i].fn.fspec.slots.size() == 1);
        CHECK(out[i].fn.fspec.slots[0].vars == (std::vector<int>{0, 1}));
        CHECK(out[i].fn.coeff.rat() == Rational(1, 4));
    }
    CHECK(out[1].w == (Word{Atom::dlogk(mi_unit(0)), Atom::dlogk(mi_unit(2))}));
    CHECK(out[2].w == (Word{Atom::dlogk(mi_unit(2)), Atom::dlogk(mi_unit(0))}));

    // the diagonal case merges the two orderings into coefficient 2
    SpectralTerm td = t;
    td.w = {Atom::uk(MultiIndex{0, 2, 0})};
    auto outd = translate(td);
    REQUIRE(outd.size() == 2);
    CHECK(outd[1].fn.coeff.rat() == Rational(1, 2));
    CHECK(outd[1].w == (Word{Atom::dlogk(mi_unit(1)), Atom::dlogk(mi_unit(1))}));
}

TEST_CASE("spectral rearrangement against the matrix model", "[spectral]") {
    auto m = metric_conformal3();
    SpectralModel model(2024, m.radial_a, m.eprime);

    std::vector<RadialTerm> cases = {
        {Coefficient(Rational(1)), 3, {Atom::b0u(2), Atom::dk(1), Atom::b0u(1)}},
        {Coefficient(Rational(1)), 3,
         {Atom::kpow(2), Atom::b0u(2), Atom::dk(0), Atom::b0u(1)}},
        {Coefficient(Rational(1)), 3,
         {Atom::kpow(-1), Atom::b0u(1), Atom::dk(MultiIndex{0, 1, 1}), Atom::kpow(3),
          Atom::b0u(2), Atom::dk(2), Atom::b0u(1)}},
        {Coefficient(Rational(1)), 5,
         {Atom::dk(0), Atom::b0u(2), Atom::dk(MultiIndex{2, 0, 0}), Atom::b0u(1),
          Atom::kpow(2)}},
    };
    for (const RadialTerm& rt : cases) {
        int msum = 0;
        for (const Atom& a : rt.w)
            if (a.kind == AtomKind::B0u) msum += a.r;
        Mat lhs = model.radial_integral(rt.w, msum - 0.5 * rt.nu2);

        SpectralTerm t = to_spectral(rt, m);
        check_mats(model.spectral_value(t), lhs, 1e-9);

        normalize_spectral(t);
        check_mats(model.spectral_value(t), lhs, 1e-9);
    }
}

TEST_CASE("log k rewriting against divided differences", "[spectral]") {
    auto m = metric_conformal3();
    SpectralModel model(77, m.radial_a, m.eprime);
    const int ep = m.eprime;

    // k^-1 delta(k) = f of the modular log times delta(log k), entry by entry
    Mat uk = model.op_value(Atom::uk(mi_unit(1)));
    Mat dl = model.op_value(Atom::dlogk(mi_unit(1)));
    for (int a = 0; a < nct::testing::NM; ++a)
        for (int b = 0; b < nct::testing::NM; ++b) {
            double s = ep * (model.h(b) - model.h(a));
            CHECK_THAT(uk[a][b], WithinAbs(dl[a][b] * f_eval(ep, s), 1e-12));
        }

    // one and two derivation operands inside a full radial term
    std::vector<RadialTerm> cases = {
        {Coefficient(Rational(1)), 3, {Atom::b0u(2), Atom::dk(MultiIndex{0, 1, 1}), Atom::b0u(1)}},
        {Coefficient(Rational(1)), 3, {Atom::b0u(1), Atom::dk(MultiIndex{0, 0, 2}), Atom::b0u(2)}},
        {Coefficient(Rational(1)), 3,
         {Atom::kpow(1), Atom::b0u(2), Atom::dk(2), Atom::kpow(-2), Atom::b0u(1),
          Atom::dk(MultiIndex{1, 1, 0}), Atom::b0u(1)}},
        {Coefficient(Rational(1)), 5,
         {Atom::dk(MultiIndex{2, 0, 0}), Atom::b0u(2), Atom::dk(0), Atom::b0u(1)}},
    };
    for (const RadialTerm& rt : cases) {
        int msum = 0;
        for (const Atom& a : rt.w)
            if (a.kind == AtomKind::B0u) msum += a.r;
        Mat lhs = model.radial_integral(rt.w, msum - 0.5 * rt.nu2);

        SpectralTerm t = to_spectral(rt, m);
        normalize_spectral(t);
        check_mats(translated_value(model, translate(t)), lhs, 1e-9);
    }
}

TEST_CASE("full spectral stage of a parametrix reduction", "[spectral]") {
    // one genuine reduced term of each metric, carried through every stage
    for (const auto* name : {"conformal3", "nonconformal3", "conformal2"}) {
        REQUIRE(metric_by_name(name) != nullptr);
        const MetricDescriptor& m = *metric_by_name(name);
        SpectralModel model(5150, m.radial_a, m.eprime);
        SymbolExpr e;
        e.add({Atom::b0(1), Atom::kpow(2), Atom::dk(0), Atom::b0(1), Atom::dk(1),
               Atom::kpow(-2), Atom::b0(1)},
              {2, 0, 0}, Coefficient(Rational(1)));
        for (const RadialTerm& rt : reduce(e, m)) {
            int msum = 0;
            for (const Atom& a : rt.w)
                if (a.kind == AtomKind::B0u) msum += a.r;
            Mat lhs = scale_mat(model.radial_integral(rt.w, msum - 0.5 * rt.nu2),
                                rt.coeff.to_double());
            SpectralTerm t = to_spectral(rt, m);
            int deg = spectral_k_degree(t);
            normalize_spectral(t);
            CHECK(spectral_k_degree(t) == deg);
            check_mats(translated_value(model, translate(t)), lhs, 1e-9);
        }
    }
}
