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

TEST_CASE("closed-form catalogue agrees with quadrature", "[appendix]") {
    require_all(check_closed_forms());
}

TEST_CASE("expansion block matches the term table", "[appendix]") {
    require_all(check_expansion_fixture());
}

TEST_CASE("reduced integrand matches the term table", "[appendix]") {
    require_all(check_reduction_fixture());
}

TEST_CASE("spectral groups evaluate to the catalogue combinations", "[appendix]") {
    require_all(check_spectral_groups());
}
