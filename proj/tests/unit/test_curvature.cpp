#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "nct/checks.hpp"

using namespace nct;

namespace {

void require_all(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results) {
        INFO(r.name << (r.detail.empty() ? "" : ": " + r.detail));
        CHECK(r.pass);
    }
}

}  // namespace

TEST_CASE("conformal scalar density matches its closed forms", "[curvature]") {
    require_all(check_conformal_scalar());
}

TEST_CASE("conformal 1-form density matches its closed forms", "[curvature]") {
    require_all(check_conformal_one_form());
}

TEST_CASE("conformal Ricci density assembles the expected weights", "[curvature]") {
    require_all(check_conformal_ricci());
}

TEST_CASE("mixed-scaling scalar density matches its closed forms", "[curvature]") {
    require_all(check_mixed_scalar());
}

TEST_CASE("mixed-scaling 1-form density matches its closed forms", "[curvature]") {
    require_all(check_mixed_one_form());
}

TEST_CASE("mixed-scaling Ricci density carries the difference weights", "[curvature]") {
    require_all(check_mixed_ricci());
}

TEST_CASE("small-argument limits of the curvature weights", "[curvature]") {
    require_all(check_classical_limits());
}

TEST_CASE("structural identities hold on fuzzed points", "[curvature]") {
    require_all(check_structure());
}

TEST_CASE("distinguished circle splits off a sqrt(pi) factor", "[curvature]") {
    require_all(check_product_split());
}

TEST_CASE("commutative limits recover the classical densities", "[curvature]") {
    require_all(check_abelianization());
}
