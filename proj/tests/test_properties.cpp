#include "properties.hpp"

#include <doctest.h>

using namespace fop::testing;

namespace {

void require_clean(const PropertyTally& t, std::size_t min_cases) {
    for (const auto& m : t.messages) MESSAGE(m);
    CHECK(t.cases >= min_cases);
    CHECK(t.failures == 0);
}

}  // namespace

TEST_CASE("oracle helpers") {
    CHECK(cheb_derivative(3, 0, 0.5) == doctest::Approx(4 * 0.125 - 3 * 0.5));
    CHECK(cheb_derivative(3, 1, 0.5) == doctest::Approx(12 * 0.25 - 3));
    CHECK(cheb_derivative(4, 4, 0.1) == doctest::Approx(192.0));
    CHECK(ultra_at_one(1, 4) == doctest::Approx(5.0));
    CHECK(weighted_monomial_integral(2, -1) == doctest::Approx(2.0 / 3.0));
    CHECK(weighted_monomial_integral(0, 1) == doctest::Approx(3.14159265358979 / 2));
}

TEST_CASE("property: GMRES residual history is non-increasing") { require_clean(gmres_monotonicity(250, 101), 250); }

TEST_CASE("property: Gauss rules integrate degree 2m-1 exactly") {
    require_clean(quadrature_exactness(300, 202), 300);
}

TEST_CASE("property: D_lambda maps Chebyshev coefficients to derivative coefficients") {
    require_clean(diff_identity(200, 303), 200);
}

TEST_CASE("property: conversion chain preserves values") { require_clean(conversion_identity(200, 404), 200); }

TEST_CASE("property: M_lambda(a) multiplies by a") { require_clean(mult_identity(200, 505), 200); }

TEST_CASE("property: four-fold integrated Hermite functions are conforming") {
    require_clean(phi_conformity(300, 606), 300);
}
