#include <catch2/catch_amalgamated.hpp>

#include "nct/rational.hpp"
#include "nct/reduce.hpp"

using namespace nct;

TEST_CASE("rational arithmetic reduces and compares", "[rational]") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(1, 3) / Rational(2, 9) == Rational(3, 2));
    CHECK(Rational(-2, 3).pow(-2) == Rational(9, 4));
    CHECK(Rational(1, 2) < Rational(2, 3));
    CHECK(Rational(7).str() == "7");
    CHECK(Rational(-7, 2).str() == "-7/2");
}

TEST_CASE("rational overflow is detected", "[rational]") {
    Rational big(std::int64_t{1} << 62);
    CHECK_THROWS_AS(big * Rational(4), std::overflow_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("coefficients track the power of sqrt(pi)", "[rational]") {
    Coefficient a(Rational(1, 2), 1);
    Coefficient b(Rational(1, 3), 1);
    CHECK((a + b).rat() == Rational(5, 6));
    CHECK((a + b).pi_half() == 1);
    CHECK((a * b).pi_half() == 2);
    Coefficient c(Rational(1), -7);
    CHECK_THROWS_AS(a + c, std::logic_error);
    CHECK_NOTHROW(a + Coefficient());                 // zero joins any power
    CHECK(Coefficient(Rational(0), 5).pi_half() == 0);  // zero forgets its power
    CHECK(Coefficient(Rational(2), 2).to_double() == Catch::Approx(2 * M_PI));
}

TEST_CASE("half integer gamma values", "[rational]") {
    CHECK(gamma_half(1) == Coefficient(Rational(1), 1));        // Gamma(1/2)
    CHECK(gamma_half(3) == Coefficient(Rational(1, 2), 1));     // Gamma(3/2)
    CHECK(gamma_half(5) == Coefficient(Rational(3, 4), 1));     // Gamma(5/2)
    CHECK(gamma_half(6) == Coefficient(Rational(2)));           // Gamma(3)
    CHECK(gamma_int(5) == Rational(24));
}

TEST_CASE("angular moments", "[rational]") {
    CHECK(circle_moment(0, 0) == Coefficient(Rational(2), 2));   // 2 pi
    CHECK(circle_moment(2, 0) == Coefficient(Rational(1), 2));   // pi
    CHECK(circle_moment(2, 2) == Coefficient(Rational(1, 4), 2));
    CHECK(circle_moment(1, 2).is_zero());
    CHECK(sphere_moment({0, 0, 0}) == Coefficient(Rational(4), 2));     // 4 pi
    CHECK(sphere_moment({2, 0, 0}) == Coefficient(Rational(4, 3), 2));  // 4 pi / 3
    CHECK(sphere_moment({4, 0, 0}) == Coefficient(Rational(4, 5), 2));
    CHECK(sphere_moment({2, 2, 0}) == Coefficient(Rational(4, 15), 2));
    CHECK(sphere_moment({1, 1, 2}).is_zero());
}
