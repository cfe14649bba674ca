// Acceptance gate: one line per criterion, each criterion a thin
// wrapper over the check drivers with its tolerance and runtime budget
// pinned here. Prints PASS or FAIL per criterion and exits nonzero if
// any fail, so the full bar is readable from the test log alone.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nct/checks.hpp"

namespace {

struct Criterion {
    int id;
    std::string what;
    double budget_s;  // wall clock bound, 0 for none
    std::function<std::vector<nct::CheckResult>()> run;
};

std::vector<nct::CheckResult> concat(std::vector<nct::CheckResult> a,
                                     std::vector<nct::CheckResult> b) {
    for (nct::CheckResult& r : b) a.push_back(std::move(r));
    return a;
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;

    const std::vector<Criterion> criteria = {
        {1, "closed-form catalogue vs quadrature, 28 functions, rel 1e-8", 30,
         [] { return nct::check_closed_forms(1e-8, 20, 7); }},
        {2, "conformal scalar weights K, H, rel 1e-6", 120,
         [] { return nct::check_conformal_scalar(1e-6); }},
        {3, "conformal 1-form weights K, F, T, W, S and Ricci assembly, rel 1e-6", 0,
         [] {
             return concat(nct::check_conformal_one_form(1e-6),
                           nct::check_conformal_ricci(1e-6));
         }},
        {4, "mixed-scaling scalar weights K1, K2, H1, H2, rel 1e-6", 0,
         [] { return nct::check_mixed_scalar(1e-6); }},
        {5, "mixed-scaling 1-form matrix and Ricci difference weights, rel 1e-6", 900,
         [] {
             return concat(nct::check_mixed_one_form(1e-6),
                           nct::check_mixed_ricci(1e-6));
         }},
        {6, "limit constants of every weight at eps 1e-4, abs 1e-3", 0,
         [] { return nct::check_classical_limits(1e-4, 1e-3); }},
        {7, "term-level expansion and reduction fixtures, exact rationals", 0,
         [] {
             return concat(nct::check_expansion_fixture(),
                           nct::check_reduction_fixture());
         }},
        {8, "commutative limits equal the classical jet polynomials exactly", 0,
         [] { return nct::check_abelianization(); }},
        {9, "parametrix inverts the symbol up to low order, exact symbolic", 0,
         [] { return nct::check_parametrix(); }},
        {10, "structural identities on 100 fuzzed points, 1e-10", 0,
         [] { return nct::check_structure(100, 11, 1e-10); }},
        {11, "circle factor sqrt(pi) split and the -1/8 two-torus bridge, rel 1e-6", 0,
         [] { return nct::check_product_split(1e-6); }},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        bool pass = true;
        std::string why;
        std::vector<nct::CheckResult> results;
        const auto start = clock::now();
        try {
            results = c.run();
        } catch (const std::exception& e) {
            pass = false;
            why = e.what();
        }
        const double secs =
            std::chrono::duration<double>(clock::now() - start).count();
        for (const nct::CheckResult& r : results)
            if (!r.pass && pass) {
                pass = false;
                why = r.name + (r.detail.empty() ? "" : ": " + r.detail);
            }
        if (pass && c.budget_s > 0 && secs > c.budget_s) {
            pass = false;
            why = "runtime over budget " + std::to_string(c.budget_s) + " s";
        }
        if (!pass) ++failures;
        std::printf("%s  %2d  %s  [%zu checks, %.2f s]%s%s\n",
                    pass ? "PASS" : "FAIL", c.id, c.what.c_str(), results.size(),
                    secs, why.empty() ? "" : "  -- ", why.c_str());
    }
    std::printf("%d of 11 criteria pass\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
