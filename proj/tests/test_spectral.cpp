#include "fop/error.hpp"
#include "fop/rng.hpp"
#include "fop/spectral.hpp"
#include "properties.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fop;
using fop::testing::cheb_derivative;

namespace {

double slope(const std::vector<double>& n, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double lx = std::log(n[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double ultra_norm_sq(int lambda, std::size_t j) {
    const double jj = static_cast<double>(j);
    return std::numbers::pi * std::pow(2.0, 1.0 - 2.0 * lambda) *
           std::exp(std::lgamma(jj + 2.0 * lambda) - std::lgamma(jj + 1.0) - 2.0 * std::lgamma(lambda)) /
           (jj + lambda);
}

BVProblem second_order(RealFunction a1, RealFunction a0, RealFunction f) {
    BVProblem p;
    p.order = 2;
    p.coeffs = {std::move(a0), std::move(a1)};
    p.rhs = std::move(f);
    p.bcs = {{-1.0, 0, 0.0}, {1.0, 0, 0.0}};
    return p;
}

BVProblem biharmonic24() {
    BVProblem p;
    p.order = 4;
    p.coeffs = {{}, {}, {}, {}};
    p.rhs = [](double) { return 24.0; };
    p.bcs = {{-1.0, 0, 0.0}, {1.0, 0, 0.0}, {-1.0, 1, 0.0}, {1.0, 1, 0.0}};
    return p;
}

}  // namespace

TEST_CASE("diff_matrix") {
    const BandedMatrix d1 = diff_matrix(1, 6);
    for (std::size_t k = 1; k < 6; ++k) CHECK(d1(k - 1, k) == doctest::Approx(static_cast<double>(k)));
    CHECK(d1(0, 0) == 0.0);
    CHECK(d1(2, 2) == 0.0);

    const BandedMatrix d2 = diff_matrix(2, 6);
    CHECK(d2(0, 2) == doctest::Approx(4.0));
    CHECK(d2(1, 3) == doctest::Approx(6.0));

    SUBCASE("x^4 - 2x^2 + 1 twice differentiated") {
        // x^4 = (3 T0 + 4 T2 + T4) / 8, x^2 = (T0 + T2) / 2
        const Vector c{3.0 / 8 - 1 + 1, 0.0, 0.5 - 1, 0.0, 1.0 / 8, 0.0};
        const Vector dc = d2.apply(c);
        for (int i = 0; i < 10; ++i) {
            const double x = -0.95 + 0.2 * i;
            CHECK(ultra_series_eval(2, dc, x) == doctest::Approx(12 * x * x - 4).epsilon(1e-12));
        }
    }
}

TEST_CASE("conversion_matrix") {
    const BandedMatrix s0 = conversion_matrix(0, 6);
    CHECK(s0(0, 0) == 1.0);
    CHECK(s0(0, 1) == 0.0);
    CHECK(s0(0, 2) == doctest::Approx(-0.5));
    CHECK(s0(1, 1) == doctest::Approx(0.5));
    CHECK(s0(3, 5) == doctest::Approx(-0.5));

    const BandedMatrix s2 = conversion_matrix(2, 6);
    CHECK(s2(0, 0) == 1.0);
    CHECK(s2(1, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(s2(0, 2) == doctest::Approx(-2.0 / 4.0));
    CHECK(s2(1, 3) == doctest::Approx(-2.0 / 5.0));

    const double x = 0.7;
    CHECK((ultra_eval(1, 2, x) - ultra_eval(1, 0, x)) / 2 == doctest::Approx(-0.02));
    CHECK(cheb_eval(Vector{0, 0, 1}, x) == doctest::Approx(-0.02));

    SUBCASE("S_lambda preserves values of a degree-10 polynomial") {
        Rng rng(42);
        for (int lambda = 1; lambda <= 4; ++lambda) {
            Vector c(11);
            for (double& v : c) v = rng.normal();
            const Vector out = conversion_matrix(lambda, 11).apply(c);
            for (int i = 0; i < 10; ++i) {
                const double xi = rng.uniform(-1.0, 1.0);
                CHECK(std::abs(ultra_series_eval(lambda + 1, out, xi) - ultra_series_eval(lambda, c, xi)) <= 1e-12 * 1e4);
            }
        }
    }
}

TEST_CASE("mult_matrix") {
    for (int lambda = 0; lambda <= 3; ++lambda) {
        const DenseMatrix m = mult_matrix([](double) { return 1.0; }, lambda, 8).densify();
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) CHECK(m(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
    }

    const DenseMatrix mx = mult_matrix([](double x) { return x; }, 0, 6).densify();
    CHECK(mx(1, 0) == doctest::Approx(1.0));
    CHECK(mx(0, 1) == doctest::Approx(0.5));
    CHECK(mx(2, 1) == doctest::Approx(0.5));
    CHECK(mx(1, 2) == doctest::Approx(0.5));
    CHECK(mx(0, 0) == doctest::Approx(0.0));

    const BandedMatrix m2 = mult_matrix([](double x) { return x; }, 2, 8);
    Vector c3(8, 0.0);
    c3[3] = 1.0;
    const Vector out = m2.apply(c3);
    for (int i = 0; i < 10; ++i) {
        const double x = -0.9 + 0.2 * i;
        CHECK(std::abs(ultra_series_eval(2, out, x) - x * ultra_eval(2, 3, x)) <= 1e-12);
    }

    CHECK_THROWS_AS(resolve_chebyshev([](double x) { return std::abs(x); }), UnresolvedCoefficient);
}

TEST_CASE("boundary rows") {
    const Vector right = boundary_row({1.0, 0, 0.0}, 6);
    const Vector left = boundary_row({-1.0, 0, 0.0}, 6);
    for (std::size_t k = 0; k < 6; ++k) {
        CHECK(right[k] == 1.0);
        CHECK(left[k] == (k % 2 == 0 ? 1.0 : -1.0));
    }
    // T_k'(1) = k^2
    const Vector slope_row = boundary_row({1.0, 1, 0.0}, 6);
    for (std::size_t k = 0; k < 6; ++k) CHECK(slope_row[k] == doctest::Approx(static_cast<double>(k * k)));
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(cheb_endpoint_derivative(k, 2, -1.0) == doctest::Approx(cheb_derivative(k, 2, -1.0)));
        CHECK(cheb_endpoint_derivative(k, 3, 1.0) == doctest::Approx(cheb_derivative(k, 3, 1.0)));
    }

    const SpectralSystem s = assemble_unpreconditioned(example_spectral_problem(), 16);
    for (std::size_t k = 0; k < 16; ++k) {
        CHECK(s.matrix(0, k) == doctest::Approx(k % 2 == 0 ? 1.0 : -1.0));
        CHECK(s.matrix(1, k) == doctest::Approx(1.0));
    }
}

TEST_CASE("cheb_diff_dense agrees with the recurrence oracle") {
    const std::size_t n = 12;
    const DenseMatrix d = cheb_diff_dense(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vector e(n, 0.0);
        e[k] = 1.0;
        const Vector de = matvec(d, e);
        for (int i = 0; i < 7; ++i) {
            const double x = -0.9 + 0.3 * i;
            CHECK(cheb_eval(de, x) == doctest::Approx(cheb_derivative(k, 1, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("right_diag_R") {
    const Vector r1 = right_diag_R(1, 4);
    CHECK(r1[0] == 1.0);
    CHECK(r1[1] == 1.0);
    CHECK(r1[2] == doctest::Approx(0.5));
    CHECK(r1[3] == doctest::Approx(1.0 / 3.0));
    const Vector r2 = right_diag_R(2, 5);
    const double expected[] = {0.5, 0.5, 0.25, 0.5 / 3, 0.125};
    for (std::size_t i = 0; i < 5; ++i) CHECK(r2[i] == doctest::Approx(expected[i]));

    const BVProblem p = example_spectral_problem();
    const SpectralSystem plain = assemble_ultraspherical(p, 12);
    const SpectralSystem scaled = assemble_ultraspherical_scaled(p, 12);
    REQUIRE(scaled.diag_R.has_value());
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) CHECK(scaled.matrix(i, j) == plain.matrix(i, j) * (*scaled.diag_R)[j]);
}

TEST_CASE("solve_bvp exactness") {
    const BVProblem p = second_order({}, {}, [](double) { return 2.0; });
    SUBCASE("n = 8 coefficients") {
        const CoeffVector u = solve_bvp(p, 8, SpectralMethod::Ultra);
        CHECK(u.basis == Basis::Chebyshev);
        CHECK(u.coeffs[0] == doctest::Approx(-0.5));
        CHECK(u.coeffs[2] == doctest::Approx(0.5));
        for (std::size_t k : {1u, 3u, 4u, 5u, 6u, 7u}) CHECK(std::abs(u.coeffs[k]) <= 1e-14);
    }
    for (auto m : {SpectralMethod::Unprec, SpectralMethod::Ultra, SpectralMethod::UltraR}) {
        const CoeffVector u = solve_bvp(p, 16, m);
        double err = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = -1.0 + 0.01 * i;
            err = std::max(err, std::abs(u(x) - (x * x - 1)));
        }
        CHECK(err <= 1e-12);
    }
    SUBCASE("u'''' = 24") {
        const CoeffVector u = solve_bvp(biharmonic24(), 16, SpectralMethod::Ultra);
        double err = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = -1.0 + 0.01 * i;
            err = std::max(err, std::abs(u(x) - (1 - x * x) * (1 - x * x)));
        }
        CHECK(err <= 1e-10);
    }
}

TEST_CASE("errors") {
    const BVProblem p = example_spectral_problem();
    CHECK_THROWS_AS(assemble_ultraspherical(p, 4), Error);
    BVProblem bad = p;
    bad.bcs = {{1.0, 0, 0.0}, {1.0, 0, 1.0}};
    CHECK_THROWS_AS(solve_bvp(bad, 16, SpectralMethod::Ultra), Error);
}

TEST_CASE("ultraspherical operator equals the Gegenbauer projection of L T_k") {
    struct Case {
        BVProblem p;
        std::size_t n;
        std::size_t quad;
    };
    std::vector<Case> cases;
    cases.push_back({example_spectral_problem(), 24, 40});
    BVProblem b4 = biharmonic24();
    b4.coeffs = {[](double x) { return 1 + x * x; }, [](double x) { return 3 * x; }, [](double) { return -2.0; },
                 [](double x) { return x * x * x; }};
    cases.push_back({b4, 32, 40});
    cases.push_back({second_order([](double x) { return std::exp(x); }, [](double x) { return std::cos(3 * x); },
                                  [](double) { return 1.0; }),
                     20, 80});

    for (const auto& c : cases) {
        const int order = c.p.order;
        const DenseMatrix op = ultraspherical_operator(c.p, c.n).densify();
        const QuadratureRule rule = gauss_gegenbauer(c.quad, order);
        double worst = 0.0;
        for (std::size_t j = 0; j + static_cast<std::size_t>(order) < c.n; ++j) {
            double row_scale = 0.0;
            for (std::size_t k = 0; k < c.n; ++k) row_scale = std::max(row_scale, std::abs(op(j, k)));
            for (std::size_t k = 0; k < c.n; ++k) {
                const double ref = rule.integrate([&](double x) {
                    double lt = cheb_derivative(k, order, x);
                    for (int d = 0; d < order; ++d)
                        if (c.p.coeffs[static_cast<std::size_t>(d)])
                            lt += c.p.coeffs[static_cast<std::size_t>(d)](x) * cheb_derivative(k, d, x);
                    return ultra_eval(order, j, x) * lt;
                }) / ultra_norm_sq(order, j);
                worst = std::max(worst, std::abs(op(j, k) - ref) / std::max(row_scale, 1.0));
            }
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("ultraspherical system is banded") {
    BVProblem p = biharmonic24();
    p.coeffs = {[](double x) { return x * x; }, {}, [](double x) { return x; }, {}};
    const std::size_t n = 40;
    const SpectralSystem s = assemble_ultraspherical(p, n);
    const std::size_t band = 4 + 8 + 2 * 2;
    for (std::size_t i = 4; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t row = i - 4;
            const std::size_t dist = k > row ? k - row : row - k;
            if (dist > band) CHECK(s.matrix(i, k) == 0.0);
        }
}

TEST_CASE("condition number growth for the example problem") {
    const BVProblem p = example_spectral_problem();
    std::vector<double> ns, cu, cl, cr;
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
        ns.push_back(static_cast<double>(n));
        cu.push_back(cond2(assemble(p, n, SpectralMethod::Unprec).matrix));
        cl.push_back(cond2(assemble(p, n, SpectralMethod::Ultra).matrix));
        cr.push_back(cond2(assemble(p, n, SpectralMethod::UltraR).matrix));
    }
    CHECK(std::abs(slope(ns, cu) - 4.0) <= 0.5);
    CHECK(std::abs(slope(ns, cl) - 1.0) <= 0.3);
    CHECK(*std::max_element(cr.begin(), cr.end()) / *std::min_element(cr.begin(), cr.end()) <= 3.0);
}

TEST_CASE("self-convergence at n = 1024") {
    const BVProblem p = example_spectral_problem();
    Vector ref = solve_bvp(p, 2048, SpectralMethod::UltraR).coeffs;
    const auto deviation = [&](SpectralMethod m) {
        Vector u = solve_bvp(p, 1024, m).coeffs;
        u.resize(ref.size(), 0.0);
        return relative_error(u, ref) * norm2(ref);
    };
    const double du = deviation(SpectralMethod::Ultra);
    const double dr = deviation(SpectralMethod::UltraR);
    const double dn = deviation(SpectralMethod::Unprec);
    MESSAGE("ultra " << du << " ultraR " << dr << " unprec " << dn);
    CHECK(du <= 1e-8);
    CHECK(dr <= 1e-8);
    CHECK(dn >= 10.0 * std::max(du, dr));
}
