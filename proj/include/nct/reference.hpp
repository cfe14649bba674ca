#pragma once

// Closed forms for the radial integral family and the grouped spectral
// weights built from them.
//
// Every F listed here is a rational/logarithmic closed form of the integral
// described by an FSpec, so each entry pairs the formula with the spec it
// must reproduce; verify_closed_forms samples both sides and reports the
// worst relative deviation per function.  The quadrature backend stays the
// ground truth, the closed forms are the fast path.
//
// The psi/phi weights are the per-word spectral functions of the axially
// scaled 3-torus Laplacian: psi for a single second derivation, phi for a
// pair of first derivations, in the planar (1) and axial (2) directions.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nct/fspec.hpp"
#include "nct/rational.hpp"

namespace nct {
namespace ref {

namespace detail {

inline double sq(double x) { return x * x; }
inline double cube(double x) { return x * x * x; }

// conformal family: slot arguments enter through s^(2/3)

inline double f_11(const std::vector<double>& s) {
    double c = std::cbrt(s[0]);
    return M_PI / (c * c + c);
}

inline double f_21(const std::vector<double>& s) {
    double c = std::cbrt(s[0]);
    return M_PI * (c + 2) / (2 * sq(c + 1) * c);
}

inline double f_31(const std::vector<double>& s) {
    double c = std::cbrt(s[0]);
    return M_PI * (3 * c * c + 9 * c + 8) / (8 * cube(c + 1) * c);
}

inline double f_111(const std::vector<double>& s) {
    double c1 = std::cbrt(s[0]), c2 = std::cbrt(s[1]);
    return M_PI * (c1 * (c2 + 1) + 1)
         / ((c1 + 1) * s[0] * (c2 + 1) * c2 * (c1 * c2 + 1));
}

inline double f_121(const std::vector<double>& s) {
    double c1 = std::cbrt(s[0]), c2 = std::cbrt(s[1]);
    return M_PI * (2 * c1 * c1 * sq(c2 + 1) + c1 * sq(c2 + 2) + c2 + 2)
         / (2 * sq(c1 + 1) * std::pow(s[0], 5.0 / 3.0) * sq(c2 + 1) * c2
            * (c1 * c2 + 1));
}

inline double f_211(const std::vector<double>& s) {
    double c1 = std::cbrt(s[0]), c2 = std::cbrt(s[1]);
    return M_PI * ((c1 + 2) * c1 * (c2 + 1) * (c1 * c2 + 2) + 2)
         / (2 * sq(c1 + 1) * s[0] * (c2 + 1) * c2 * sq(c1 * c2 + 1));
}

inline double f_221(const std::vector<double>& s) {
    double c1 = std::cbrt(s[0]), c2 = std::cbrt(s[1]);
    double num = c1 * (2 * c2 * c2 + 7 * c2 + 6)
               + sq(c2 + 1) * (c1 * c1 * c1 * c1 * c2 + c1 * c1 * (c2 + 6)
                               + s[0] * (3 * c2 + 2))
               + c2 + 2;
    return M_PI * num
         / (2 * cube(c1 + 1) * std::pow(s[0], 5.0 / 3.0) * sq(c2 + 1) * c2
            * sq(c1 * c2 + 1));
}

inline double f_311(const std::vector<double>& s) {
    double c1 = std::cbrt(s[0]), c2 = std::cbrt(s[1]);
    double c12 = std::cbrt(s[0] * s[1]);
    double num = (9 * c1 * c1 * c1 * c1 * c2 + 24 * c1 * c1) * sq(c2 + 1)
               + (24 * c1 + 3 * c2 * c2 * c1 * c1 * c1 * c1 * c1
                  + 27 * c2 * s[0] + 8 * c2 * c2 * s[0] + 8 * s[0]) * (c2 + 1)
               + 8;
    return M_PI * num
         / (8 * s[0] * c2 * cube(c1 + 1) * (c2 + 1) * cube(c12 + 1));
}

// axially scaled family: plain slot arguments, weights nu = 2 and nu = 3

inline double f2_11(const std::vector<double>& s) {
    return std::log(s[0]) / (s[0] - 1);
}

inline double f2_21(const std::vector<double>& s) {
    return (s[0] - std::log(s[0]) - 1) / sq(s[0] - 1);
}

inline double f2_31(const std::vector<double>& s) {
    return ((s[0] - 4) * s[0] + 2 * std::log(s[0]) + 3) / (2 * cube(s[0] - 1));
}

inline double f3_31(const std::vector<double>& s) {
    return (s[0] * s[0] - 2 * s[0] * std::log(s[0]) - 1) / (2 * cube(s[0] - 1));
}

inline double f3_21(const std::vector<double>& s) {
    return (s[0] * (std::log(s[0]) - 1) + 1) / sq(s[0] - 1);
}

inline double f2_101(const std::vector<double>& s) {
    double p = s[0] * s[1];
    return std::log(p) / (p - 1);
}

inline double f2_111(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    return ((p - 1) * std::log(a) - (a - 1) * std::log(p))
         / ((a - 1) * a * (b - 1) * (p - 1));
}

inline double f2_201(const std::vector<double>& s) {
    double p = s[0] * s[1];
    return (p - std::log(p) - 1) / sq(p - 1);
}

inline double f2_121(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    double num = sq(a - 1) * std::log(p)
               + (p - 1) * (-p + (a * (b - 2) + 1) * std::log(a) + a + b - 1);
    return num / (sq(a - 1) * a * a * sq(b - 1) * (p - 1));
}

inline double f2_211(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    double num = sq(a - 1) * std::log(p)
               + (p - 1) * ((a - 1) * a * (b - 1) + (1 - p) * std::log(a));
    return num / (sq(a - 1) * a * (b - 1) * sq(p - 1));
}

// The log(s1) coefficient carries (s1 s2 - 1)^2; rebuilt by partial
// fractions and pinned against the quadrature backend.
inline double f2_221(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    double num = -sq(p - 1) * (a * (2 * b - 3) + 1) * std::log(a)
               + (p - 1) * (a - 1) * (b - 1) * (a * a * (b - 1) + p - 1)
               - cube(a - 1) * std::log(p);
    return num / (cube(a - 1) * a * a * sq(b - 1) * sq(p - 1));
}

inline double f2_301(const std::vector<double>& s) {
    double p = s[0] * s[1];
    return ((p - 3) * (p - 1) + 2 * std::log(p)) / (2 * cube(p - 1));
}

inline double f2_311(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    double num = 2 * cube(p - 1) * std::log(a) - 2 * cube(a - 1) * std::log(p)
               + a * (a - 1) * (b - 1) * (p - 1) * ((a - 3) * p - 3 * a + 5);
    return num / (2 * cube(a - 1) * a * (b - 1) * cube(p - 1));
}

inline double f3_111(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    return ((1 - p) * std::log(a) + (a - 1) * b * std::log(p))
         / ((a - 1) * (b - 1) * (p - 1));
}

inline double f3_201(const std::vector<double>& s) {
    double p = s[0] * s[1];
    return (-p + p * std::log(p) + 1) / sq(p - 1);
}

inline double f3_301(const std::vector<double>& s) {
    double p = s[0] * s[1];
    return (p * p - 2 * p * std::log(p) - 1) / (2 * cube(p - 1));
}

inline double f3_121(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    double num = (p - 1) * ((a - 1) * (b - 1) + (a - b) * std::log(a))
               - sq(a - 1) * b * std::log(p);
    return num / (sq(a - 1) * a * sq(b - 1) * (p - 1));
}

inline double f3_211(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    double num = sq(p - 1) * std::log(a)
               - (a - 1) * ((b - 1) * (p - 1) + (a - 1) * b * std::log(p));
    return num / (sq(a - 1) * (b - 1) * sq(p - 1));
}

inline double f3_221(const std::vector<double>& s) {
    double a = s[0], b = s[1];
    double la = std::log(a), lp = std::log(a * b);
    double a2 = a * a, a3 = a2 * a, b2 = b * b, b3 = b2 * b;
    double num = a2
               + b3 * a3 * (la - 2) + b2 * a3 * (3 - 2 * la)
               + b * a3 * (lp - 1) + b3 * a2 * (la + 2)
               - b2 * a2 * 2 * la
               + b * a2 * (4 * la - 3 * lp - 3) + b2 * a * (-2 * la - 3)
               - a * 2 * la
               + b * a * (la + 3 * lp + 3) + b * (la - lp + 1) - 1;
    return num / (cube(a - 1) * a * sq(b - 1) * sq(a * b - 1));
}

inline double f3_311(const std::vector<double>& s) {
    double a = s[0], b = s[1], p = a * b;
    double num = 2 * cube(a - 1) * b * std::log(p)
               - 2 * cube(p - 1) * std::log(a)
               + (a - 1) * (b - 1) * (p - 1) * ((a + 1) * p + a - 3);
    return num / (2 * cube(a - 1) * (b - 1) * cube(p - 1));
}

inline FSpec make_spec(int nu2, Rational slot_exp, std::vector<int> ms) {
    FSpec f;
    f.nu2 = nu2;
    f.slot_exp = slot_exp;
    for (size_t i = 0; i < ms.size(); ++i) {
        FSlot slot;
        slot.m = ms[i];
        for (int v = 0; v < static_cast<int>(i); ++v) slot.vars.push_back(v);
        f.slots.push_back(std::move(slot));
    }
    f.canonicalize();
    return f;
}

}  // namespace detail

struct ClosedForm {
    std::string name;
    FSpec spec;
    int arity;
    double (*closed)(const std::vector<double>&);
};

// All closed forms used by the curvature pipelines: eight for the conformal
// family (nu2 = 3, slot exponent 2/3) and twenty for the axially scaled one
// (slot exponent 1, nu2 = 4 or 6).
inline const std::vector<ClosedForm>& closed_forms() {
    using detail::make_spec;
    static const std::vector<ClosedForm> table = [] {
        const Rational conf(2, 3), axial(1);
        std::vector<ClosedForm> t;
        auto add = [&t](const char* name, int nu2, Rational se,
                        std::vector<int> ms,
                        double (*fn)(const std::vector<double>&)) {
            int arity = static_cast<int>(ms.size()) - 1;
            t.push_back({name, make_spec(nu2, se, std::move(ms)), arity, fn});
        };
        add("F_11", 3, conf, {1, 1}, detail::f_11);
        add("F_21", 3, conf, {2, 1}, detail::f_21);
        add("F_31", 3, conf, {3, 1}, detail::f_31);
        add("F_111", 3, conf, {1, 1, 1}, detail::f_111);
        add("F_121", 3, conf, {1, 2, 1}, detail::f_121);
        add("F_211", 3, conf, {2, 1, 1}, detail::f_211);
        add("F_221", 3, conf, {2, 2, 1}, detail::f_221);
        add("F_311", 3, conf, {3, 1, 1}, detail::f_311);
        add("F2_11", 4, axial, {1, 1}, detail::f2_11);
        add("F2_21", 4, axial, {2, 1}, detail::f2_21);
        add("F2_31", 4, axial, {3, 1}, detail::f2_31);
        add("F3_21", 6, axial, {2, 1}, detail::f3_21);
        add("F3_31", 6, axial, {3, 1}, detail::f3_31);
        add("F2_101", 4, axial, {1, 0, 1}, detail::f2_101);
        add("F2_111", 4, axial, {1, 1, 1}, detail::f2_111);
        add("F2_201", 4, axial, {2, 0, 1}, detail::f2_201);
        add("F2_121", 4, axial, {1, 2, 1}, detail::f2_121);
        add("F2_211", 4, axial, {2, 1, 1}, detail::f2_211);
        add("F2_221", 4, axial, {2, 2, 1}, detail::f2_221);
        add("F2_301", 4, axial, {3, 0, 1}, detail::f2_301);
        add("F2_311", 4, axial, {3, 1, 1}, detail::f2_311);
        add("F3_111", 6, axial, {1, 1, 1}, detail::f3_111);
        add("F3_201", 6, axial, {2, 0, 1}, detail::f3_201);
        add("F3_301", 6, axial, {3, 0, 1}, detail::f3_301);
        add("F3_121", 6, axial, {1, 2, 1}, detail::f3_121);
        add("F3_211", 6, axial, {2, 1, 1}, detail::f3_211);
        add("F3_221", 6, axial, {2, 2, 1}, detail::f3_221);
        add("F3_311", 6, axial, {3, 1, 1}, detail::f3_311);
        return t;
    }();
    return table;
}

inline const ClosedForm& closed_form(const std::string& name) {
    for (const ClosedForm& c : closed_forms())
        if (c.name == name) return c;
    throw std::invalid_argument("unknown closed form: " + name);
}

// Closed forms for the averaged modular weights.  f is the one-variable
// average int_0^1 x^(s/e') ds, g the ordered two-variable one; both fall
// back to the quadrature backend near the removable log singularities.
inline double f_closed(int eprime, double x) {
    double l = std::log(x);
    if (std::fabs(l) < 1e-4) return f_eval(eprime, l);
    return eprime * (std::pow(x, 1.0 / eprime) - 1) / l;
}

inline double g_closed(int eprime, double x, double y) {
    double lx = std::log(x), ly = std::log(y), lxy = lx + ly;
    if (std::fabs(lx) < 1e-4 || std::fabs(ly) < 1e-4 || std::fabs(lxy) < 1e-4)
        return g_eval(eprime, lx, ly);
    double e2 = static_cast<double>(eprime) * eprime;
    return e2 / ly * ((std::pow(x * y, 1.0 / eprime) - 1) / lxy
                      - (std::pow(x, 1.0 / eprime) - 1) / lx);
}

// Spectral weight of a single second derivation in a planar direction.
inline double psi1(double s) {
    double r = std::sqrt(s);
    return -M_PI * M_PI * r * (s * std::log(s) + std::log(s) - 2 * s + 2)
         / (detail::cube(r - 1) * detail::sq(r + 1));
}

// Spectral weight of a pair of planar first derivations.
inline double phi1(double s1, double s2) {
    double r1 = std::sqrt(s1), r2 = std::sqrt(s2);
    double l1 = std::log(s1), l2 = std::log(s2), l12 = std::log(s1 * s2);
    double big =
        1
        + r1 * s1 * (s2 * s2 * r2 - r2 + 2 * s2 * r2 * l2
                     + s2 * s2 * (l12 - 2) - 2 * s2 * l12 + l12 + 2)
        - s2
        + s2 * s1 * s1 * r1 * (s2 * r2 * (l1 - 1) - s2 * (l12 - 2) + l12
                               - r2 * (l12 - 1) - 2)
        + l2
        + s2 * s1 * s1 * (s2 * (l2 - 1) + 1)
        - s1 * (s2 * s2 * (l12 - 1) - 2 * s2 * l1 + l12 + 1)
        - r1 * (s2 * r2 * (l12 + 1) - s2 * (l12 + 2) + l12 - r2 * (l1 + 1) + 2);
    return 2 * M_PI * M_PI * r1 * r2 * big
         / ((r1 - 1) * (s1 - 1) * (r2 - 1) * (s2 - 1)
            * (std::sqrt(s1 * s2) - 1) * detail::sq(s1 * s2 - 1));
}

// Spectral weight of a single axial second derivation.
inline double psi2(double s) {
    return 2 * M_PI * M_PI * (-s * s + 2 * s * std::log(s) + 1)
         / (std::sqrt(s) * detail::sq(s - 1) * std::log(s));
}

// Spectral weight of a pair of axial first derivations.
inline double phi2(double s1, double s2) {
    double l1 = std::log(s1), l2 = std::log(s2), l12 = std::log(s1 * s2);
    double big =
        detail::sq(s1 - 1)
            * (s2 * s2 * s2 * s1 + s1 * s2 * s2 - s2 * s2 + 3 * s2)
            * l2 * l2
        - detail::sq(s2 - 1)
            * (3 * s1 * s1 * s2 - s2 * s1 + s1 + 1) * l1 * l1
        + (s1 * s1 * s2 * s2 - 5 * s1 * s2 * s2 + s1 * s1 * s2
           + 2 * s2 * s2 + 4 * s1 * s2 - 5 * s2 + s1 + 1)
            * (s1 * s2 - 1) * l1 * l2
        + 2 * (s2 - 1) * (s1 - 1) * (s1 * s1 * s2 * s2 - 1)
            * std::log(s2 / s1);
    return 2 * M_PI * M_PI * big
         / (std::sqrt(s1 * s2) * (s1 - 1) * (s2 - 1)
            * detail::sq(s1 * s2 - 1) * l1 * l2 * l12);
}

// Final curvature weights for the conformally rescaled metric, taken in
// the logarithmic modular variable.  All singularities on s = 0, t = 0 and
// s + t = 0 are removable; callers keep their sample points away from
// those lines.
namespace conf3 {

// weight of a second log-derivative in the scalar density
inline double K(double s) {
    using std::exp;
    return (1 - exp(s / 3)) / (s * (exp(s / 6) + exp(s / 2)));
}

// weight of an ordered pair of first log-derivatives in the scalar density
inline double H(double s, double t) {
    using std::exp;
    double num = (exp(s / 3) + 3) * s * (exp(t / 3) - 1)
               - (exp(s / 3) - 1) * (3 * exp(t / 3) + 1) * t;
    return -3 * num
         / (s * t * (s + t) * exp((s + t) / 6) * (exp((s + t) / 3) + 1));
}

// 1-form density: weight of the mixed second log-derivative
inline double F(double s) {
    using std::exp;
    return exp(-s / 2) * (exp(s) - 1) / (2 * (1 + exp(s / 3)) * s);
}

// 1-form density: isotropic weight of a pair of first log-derivatives
inline double T(double s, double t) {
    using std::exp;
    double num = 3 * s * (1 - exp(t / 3))
                   * (exp((2 * s + t) / 3) - exp((s + t) / 3) - exp(2 * s / 3) - 1)
               + 3 * t * (1 - exp(s / 3))
                   * (exp((s + 2 * t) / 3) + exp(s / 3) + exp(t / 3) - 1);
    return num
         / (s * t * (s + t) * exp((3 * s + t) / 6) * (exp((s + t) / 3) + 1));
}

// 1-form density: directional weight of the anticommutator part
inline double W(double s, double t) {
    using std::exp;
    double num = 6 * (exp((s + t) / 3) + exp(2 * (s + t) / 3) + 1)
               * (s * exp((s + t) / 3) - exp(s / 3) * (s + t) + t);
    return num
         / (s * t * (s + t) * exp((s + t) / 2) * (exp((s + t) / 3) + 1));
}

// 1-form density: directional weight of the commutator part
inline double S(double s, double t) {
    using std::exp;
    double num = 3 * s * (exp(t / 3) - 1)
                   * (2 * exp((s + t) / 3) + exp((2 * s + 2 * t) / 3)
                      - exp((2 * s + t) / 3) + 1)
               - 3 * t * (exp(s / 3) - 1)
                   * (2 * exp((s + 2 * t) / 3) + exp((2 * s + 3 * t) / 3)
                      - exp((s + t) / 3) + exp(t / 3));
    return num
         / (s * t * (s + t) * exp((s + t) / 2) * (exp((s + t) / 3) + 1));
}

}  // namespace conf3

// Head weight of the scalar density on the conformally rescaled 2-torus in
// the Gauss curvature normalization.  The same metric viewed as the planar
// factor of the mixed-scaling 3-torus carries the weight K1 instead; the
// two normalizations differ by the constant -8, which is the bridge the
// product-decomposition suite pins down.
namespace conf2 {

inline double K(double s) {
    using std::exp;
    double es = exp(s);
    return 2 * exp(s / 2) * ((s - 2) * es + s + 2) / (s * (es - 1) * (es - 1));
}

}  // namespace conf2

// Final curvature weights for the metric that rescales only the first two
// directions.  Naming: single-index functions enter the scalar density,
// double-index ones the 1-form density matrix; the t* variants are the
// Ricci combinations.
namespace mix3 {

// scalar density, in-plane second derivative
inline double K1(double s) {
    using std::exp;
    return exp(s / 2) * (2 * exp(s) - s * exp(s) - 2 - s)
         / (4 * s * detail::sq(exp(s) - 1));
}

// scalar density, axial second derivative
inline double K2(double s) {
    using std::exp;
    return (1 - exp(2 * s) + 2 * s * exp(s))
         / (4 * s * exp(s / 2) * detail::sq(1 - exp(s)));
}

// scalar density, ordered pair of in-plane first derivatives
inline double H1(double s, double t) {
    using std::exp;
    double num = exp(s) * detail::sq(exp(t) - 1) * s * s
               - exp(t) * detail::sq(exp(s) - 1) * t * t
               - (exp(s) - exp(t)) * (exp(s + t) - 1) * s * t
               + (1 - exp(s)) * (exp(t) - 1) * (exp(s + t) - 1) * (t - s);
    return exp((s + t) / 2) * num
         / ((exp(s) - 1) * s * (exp(t) - 1) * t
            * detail::sq(exp(s + t) - 1) * (s + t));
}

// scalar density, ordered pair of axial first derivatives
inline double H2(double s, double t) {
    using std::exp;
    double num =
        detail::sq(exp(t) - 1)
            * (exp(s + t) - 3 * exp(2 * s + t) - exp(s) - 1) * s * s
        + detail::sq(exp(s) - 1)
            * (exp(s + 2 * t) + exp(s + 3 * t) - exp(2 * t) + 3 * exp(t)) * t * t
        - 2 * (exp(s) - 1) * (exp(t) - 1) * (exp(2 * (s + t)) - 1) * (s - t)
        + (exp(s + t) - 1)
            * (4 * exp(s + t) + exp(2 * s + t) - 5 * exp(s + 2 * t)
               + exp(2 * s + 2 * t) + exp(s) - 5 * exp(t) + 2 * exp(2 * t) + 1)
            * s * t;
    return num
         / (4 * exp((s + t) / 2) * (exp(s) - 1) * (exp(t) - 1)
            * detail::sq(exp(s + t) - 1) * s * t * (s + t));
}

// 1-form head weights: in-plane diagonal, row-to-axis, axis-to-row and
// axis diagonal entries of the second-derivative matrix
inline double K11(double s) {
    using std::exp;
    return (exp(2 * s) - 2 * s * exp(s) - 1) / (4 * s * detail::sq(exp(s) - 1));
}

inline double K13(double s) {
    using std::exp;
    return ((s - 1) * exp(s / 2) + exp(-s / 2)) / (4 * s * (exp(s) - 1));
}

inline double K31(double s) {
    using std::exp;
    return (exp(s) - s - 1) / (4 * s * (exp(s) - 1));
}

inline double K33(double s) {
    using std::exp;
    return (1 - exp(2 * s) + s * exp(2 * s) + s)
         / (4 * s * exp(s / 2) * detail::sq(exp(s) - 1));
}

// 1-form density, axial second derivative on the in-plane diagonal
inline double K3(double s) {
    using std::exp;
    return (2 - 2 * exp(s) + s * exp(s) + s) / (4 * s * detail::sq(exp(s) - 1));
}

// commutator weight; the matrix spreads it by constant prefactors
inline double S1(double s, double t) {
    using std::exp;
    return 1 / (2 * s * t)
         - (detail::sq(exp(s) - 1) * exp(t) * t + exp(s) * s * detail::sq(exp(t) - 1))
           / (2 * s * t * (exp(s) - 1) * (exp(t) - 1) * (exp(s + t) - 1));
}

inline double S12(double s, double t) { return S1(s, t); }
inline double S13(double s, double t) { return std::exp(-(s + t) / 2) * S1(s, t) / 2; }
inline double S31(double s, double t) { return S1(s, t) / 2; }

// anticommutator weights; off the axis they are multiples of H1
inline double W11(double s, double t) { return std::cosh((s + t) / 2) * H1(s, t) / 2; }
inline double W13(double s, double t) { return (std::exp(-s - t) - 1) * H1(s, t) / 4; }
inline double W31(double s, double t) { return std::sinh((s + t) / 2) * H1(s, t) / 2; }

inline double W33(double s, double t) {
    using std::exp;
    double num =
        detail::sq(exp(t) - 1)
            * (1 - 4 * exp(s) - exp(2 * s) - exp(s + t) - 4 * exp(2 * s + t)
               + exp(3 * s + t)) * s * s
        + 2 * (exp(s) + 1) * (exp(t) + 1) * (exp(s + t) - 1) * (exp(s) - exp(t)) * s * t
        - detail::sq(exp(s) - 1)
            * (1 - 4 * exp(t) - exp(2 * t) - exp(s + t) - 4 * exp(2 * t + s)
               + exp(3 * t + s)) * t * t
        - 4 * (exp(s) - 1) * (exp(t) - 1) * (exp(2 * (s + t)) - 1) * (s - t);
    return num
         / (16 * exp((s + t) / 2) * (exp(s) - 1) * (exp(t) - 1)
            * detail::sq(exp(s + t) - 1) * s * t * (s + t));
}

// axial pair weight on the in-plane diagonal
inline double H3(double s, double t) {
    using std::exp;
    double num =
        exp(s) * detail::sq(exp(t) - 1)
            * (-1 - 3 * exp(s) + exp(s + t) - exp(2 * s + t)) * s * s
        + detail::sq(exp(s) - 1)
            * (1 - exp(t) + 3 * exp(s + t) + exp(s + 2 * t)) * t * t
        - 4 * exp(s) * (exp(s) - 1) * (exp(t) - 1) * (exp(s + t) - 1) * (s - t)
        + (7 * exp(s + t) - 7 * exp(2 * (s + t)) - exp(3 * (s + t))
           + 2 * exp(3 * s + t) + 3 * exp(3 * s + 2 * t) + exp(2 * s + 3 * t)
           - 3 * exp(s) - 2 * exp(2 * s) - exp(t) + 1) * s * t;
    return num
         / (4 * exp(s) * (exp(s) - 1) * (exp(t) - 1)
            * detail::sq(exp(s + t) - 1) * s * t * (s + t));
}

// Axial pair weight on the axis diagonal.  The overall sign is pinned by
// the engine, by the stated limit -1/4 of the Ricci combination below and
// by the commutative Ricci tensor; the raw rational-log form circulates
// with the opposite sign.
inline double H4(double s, double t) {
    using std::exp;
    return -(exp(s) - 1) * (exp(t) - 1) * (s + t)
         / (8 * exp((s + t) / 2) * (exp(s + t) - 1) * s * t);
}

// Ricci combinations.  The three closed forms below are also equal to the
// differences K11 - K1, K33 - K2 and K3 - K2; the checks assert that.
inline double tK11(double s) {
    using std::exp;
    return (-1 + exp(s) + s * exp(s / 2)) / (4 * s * detail::sq(1 + exp(s / 2)));
}

inline double tK33(double s) { return 1 / (4 * std::exp(s / 2)); }

inline double tK3(double s) {
    using std::exp;
    return (-1 + exp(s) + s * exp(s / 2))
         / (4 * s * exp(s / 2) * detail::sq(1 + exp(s / 2)));
}

inline double tW11(double s, double t) { return W11(s, t) - H1(s, t) / 2; }
inline double tH3(double s, double t) { return H3(s, t) - H2(s, t); }
inline double tH4(double s, double t) { return H4(s, t) - H2(s, t); }
inline double tW33(double s, double t) { return W33(s, t); }

}  // namespace mix3

struct ClosedFormCheck {
    std::string name;
    double max_rel;
    bool pass;
};

// Samples each closed form against the quadrature backend at log-uniform
// points of [0.1, 10]^arity.  Points are redrawn when a removable
// singularity of the rational-log form is closer than 0.05, where double
// cancellation would dominate the comparison.
inline std::vector<ClosedFormCheck> verify_closed_forms(double tol,
                                                        int npoints,
                                                        unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> logs(std::log(0.1), std::log(10.0));
    std::vector<ClosedFormCheck> out;
    for (const ClosedForm& c : closed_forms()) {
        double worst = 0;
        for (int i = 0; i < npoints; ++i) {
            std::vector<double> s(c.arity), ls(c.arity);
            for (;;) {
                for (int j = 0; j < c.arity; ++j) {
                    ls[j] = logs(rng);
                    s[j] = std::exp(ls[j]);
                }
                bool clear = true;
                if (c.spec.slot_exp == Rational(1)) {
                    double prod = 1;
                    for (int j = 0; j < c.arity; ++j) {
                        prod *= s[j];
                        if (std::fabs(s[j] - 1) < 0.05
                            || std::fabs(prod - 1) < 0.05)
                            clear = false;
                    }
                }
                if (clear) break;
            }
            double want = fspec_eval(c.spec, ls);
            double got = c.closed(s);
            double rel = std::fabs(got - want)
                       / std::max(1e-300, std::fabs(want));
            worst = std::max(worst, rel);
        }
        out.push_back({c.name, worst, worst <= tol});
    }
    return out;
}

}  // namespace ref
}  // namespace nct
