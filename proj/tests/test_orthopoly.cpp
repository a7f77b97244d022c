#include "fop/orthopoly.hpp"
#include "fop/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fop;

namespace {

double trig_cheb_sum(std::span<const double> c, double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::cos(static_cast<double>(k) * std::acos(x));
    return s;
}

}  // namespace

TEST_CASE("cheb_eval examples") {
    CHECK(cheb_eval(Vector{0, 1}, 0.3) == doctest::Approx(0.3));
    CHECK(cheb_eval(Vector{0, 0, 1}, 0.5) == doctest::Approx(-0.5));
    Rng rng(1);
    Vector c(21);
    for (double& v : c) v = rng.normal();
    for (int i = 0; i < 50; ++i) {
        const double x = rng.uniform(-1.0, 1.0);
        CHECK(std::abs(cheb_eval(c, x) - trig_cheb_sum(c, x)) <= 1e-13 * 21);
    }
}

TEST_CASE("Clenshaw matches the trigonometric definition on a grid") {
    for (std::size_t k = 0; k <= 50; ++k) {
        Vector c(k + 1, 0.0);
        c[k] = 1.0;
        for (int j = 0; j < 100; ++j) {
            const double x = -1.0 + 2.0 * j / 99.0;
            REQUIRE(std::abs(cheb_eval(c, x) - std::cos(static_cast<double>(k) * std::acos(x))) <= 1e-12);
        }
    }
}

TEST_CASE("ultra_eval examples") {
    CHECK(ultra_eval(1, 2, 0.5) == doctest::Approx(0.0));
    for (int lambda = 1; lambda <= 4; ++lambda) CHECK(ultra_eval(lambda, 0, 0.37) == 1.0);
    CHECK(ultra_eval(2, 1, 0.3) == doctest::Approx(4 * 0.3));
    // dT_k/dx = k C^{(1)}_{k-1}
    for (std::size_t k = 1; k <= 8; ++k) {
        Vector c(k + 1, 0.0);
        c[k] = 1.0;
        const double h = 1e-5;
        const double fd = (cheb_eval(c, 0.3 + h) - cheb_eval(c, 0.3 - h)) / (2 * h);
        CHECK(std::abs(fd - static_cast<double>(k) * ultra_eval(1, k - 1, 0.3)) <= 1e-6);
    }
}

TEST_CASE("ultra_series_eval and CoeffVector agree with termwise evaluation") {
    const Vector c{0.5, -1.0, 2.0, 0.25};
    const double x = -0.41;
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * ultra_eval(3, k, x);
    CHECK(ultra_series_eval(3, c, x) == doctest::Approx(s));
    const CoeffVector v{Basis::Ultraspherical, 3, c};
    CHECK(v(x) == doctest::Approx(s));
    CHECK(mono_eval(Vector{1, 2, 3}, 2.0) == doctest::Approx(17.0));
}

TEST_CASE("cheb_transform examples") {
    const CoeffVector sq = cheb_transform([](double x) { return x * x; }, 6);
    CHECK(sq.coeffs[0] == doctest::Approx(0.5));
    CHECK(std::abs(sq.coeffs[1]) < 1e-15);
    CHECK(sq.coeffs[2] == doctest::Approx(0.5));
    for (std::size_t k = 3; k < 6; ++k) CHECK(std::abs(sq.coeffs[k]) < 1e-15);

    const CoeffVector one = cheb_transform([](double) { return 1.0; }, 5);
    CHECK(one.coeffs[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < 5; ++k) CHECK(std::abs(one.coeffs[k]) < 1e-15);

    const auto f = [](double x) { return std::sin(20 * std::numbers::pi * x); };
    const CoeffVector s = cheb_transform(f, 128);
    for (std::size_t k = 110; k < 128; ++k) CHECK(std::abs(s.coeffs[k]) < 1e-10);
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(-1.0, 1.0);
        CHECK(std::abs(s(x) - f(x)) < 1e-10);
    }
}

TEST_CASE("cheb_transform reproduces polynomial coefficients") {
    Rng rng(3);
    for (std::size_t n : {1u, 2u, 7u, 16u, 33u}) {
        Vector c(n);
        for (double& v : c) v = rng.normal();
        const CoeffVector t = cheb_transform([&](double x) { return cheb_eval(c, x); }, n);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(t.coeffs[k] - c[k]) <= 1e-13 * static_cast<double>(n));
    }
}

TEST_CASE("gauss_legendre examples") {
    const QuadratureRule one = gauss_legendre(1);
    CHECK(one.nodes[0] == 0.0);
    CHECK(one.weights[0] == doctest::Approx(2.0));
    const QuadratureRule g = gauss_legendre(11);
    const double i20 = g.integrate([](double x) { return std::pow(x, 20); });
    CHECK(std::abs(i20 / (2.0 / 21.0) - 1.0) <= 1e-13);
    const double i22 = g.integrate([](double x) { return std::pow(x, 22); });
    CHECK(std::abs(i22 - 2.0 / 23.0) > 1e-9);
}

TEST_CASE("gauss_gegenbauer examples") {
    for (std::size_t m : {1u, 2u, 5u, 20u, 64u}) {
        CHECK(std::abs(gauss_gegenbauer(m, 1).integrate([](double) { return 1.0; }) - std::numbers::pi / 2) <= 1e-13);
        CHECK(std::abs(gauss_gegenbauer(m, 2).integrate([](double) { return 1.0; }) - 3 * std::numbers::pi / 8) <= 1e-13);
    }
    const QuadratureRule g = gauss_gegenbauer(9, 3);
    for (int p = 1; p < 18; p += 2)
        CHECK(std::abs(g.integrate([p](double x) { return std::pow(x, p); })) <= 1e-14);
}

TEST_CASE("Chebyshev-weight rule is the closed form") {
    const QuadratureRule g = gauss_gegenbauer(7, 0);
    CHECK(g.weight_kind == WeightKind::Gegenbauer);
    for (std::size_t j = 0; j < 7; ++j) {
        CHECK(g.weights[j] == doctest::Approx(std::numbers::pi / 7));
        CHECK(g.nodes[j] == doctest::Approx(-std::cos((2.0 * static_cast<double>(j) + 1.0) * std::numbers::pi / 14)));
    }
}

TEST_CASE("Chebyshev polynomials are orthogonal under the Chebyshev weight") {
    const QuadratureRule g = gauss_gegenbauer(40, 0);
    for (std::size_t j = 0; j < 30; ++j)
        for (std::size_t k = 0; k < j; ++k) {
            Vector cj(j + 1, 0.0), ck(k + 1, 0.0);
            cj[j] = 1.0;
            ck[k] = 1.0;
            REQUIRE(std::abs(g.integrate([&](double x) { return cheb_eval(cj, x) * cheb_eval(ck, x); })) <= 1e-12);
        }
}

TEST_CASE("quadrature nodes are interior, increasing and interlace") {
    for (int lambda : {-1, 1, 2, 4}) {
        for (std::size_t m = 2; m <= 30; ++m) {
            const QuadratureRule a = lambda < 0 ? gauss_legendre(m) : gauss_gegenbauer(m, lambda);
            const QuadratureRule b = lambda < 0 ? gauss_legendre(m - 1) : gauss_gegenbauer(m - 1, lambda);
            REQUIRE(a.nodes.front() > -1.0);
            REQUIRE(a.nodes.back() < 1.0);
            for (std::size_t j = 0; j < m; ++j) REQUIRE(a.weights[j] > 0.0);
            for (std::size_t j = 1; j < m; ++j) REQUIRE(a.nodes[j] > a.nodes[j - 1]);
            for (std::size_t j = 0; j + 1 < m; ++j) {
                REQUIRE(a.nodes[j] < b.nodes[j]);
                REQUIRE(b.nodes[j] < a.nodes[j + 1]);
            }
        }
    }
}

TEST_CASE("symmetric tridiagonal eigen solver") {
    // Tridiagonal (1, 2, 1) Toeplitz: eigenvalues 2 + 2 cos(k pi / (m+1)).
    const std::size_t m = 8;
    const Vector d(m, 2.0), e(m - 1, 1.0);
    const TridiagonalEigen r = symmetric_tridiagonal_eigen(d, e);
    Vector expected;
    for (std::size_t k = 1; k <= m; ++k)
        expected.push_back(2.0 + 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi / (m + 1)));
    std::sort(expected.begin(), expected.end());
    Vector got = r.eigenvalues;
    std::sort(got.begin(), got.end());
    for (std::size_t k = 0; k < m; ++k) CHECK(got[k] == doctest::Approx(expected[k]).epsilon(1e-13));
    double s = 0.0;
    for (double v : r.first_components) s += v * v;
    CHECK(s == doctest::Approx(1.0));
}
