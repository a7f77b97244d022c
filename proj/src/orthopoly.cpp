#include "fop/orthopoly.hpp"

#include "fop/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace fop {

double CoeffVector::operator()(double x) const {
    switch (basis) {
        case Basis::Monomial: return mono_eval(coeffs, x);
        case Basis::Chebyshev: return cheb_eval(coeffs, x);
        case Basis::Ultraspherical: return ultra_series_eval(order, coeffs, x);
    }
    return 0.0;
}

double cheb_eval(std::span<const double> c, double x) {
    if (c.empty()) return 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = c[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c[0] + x * b1 - b2;
}

double ultra_series_eval(int lambda, std::span<const double> c, double x) {
    if (c.empty()) return 0.0;
    // b_k = c_k + alpha_k b_{k+1} + beta_{k+1} b_{k+2}, result b_0.
    const double lam = lambda;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        const double kk = static_cast<double>(k);
        const double alpha = 2.0 * (kk + lam) * x / (kk + 1.0);
        const double beta_next = -(kk + 2.0 * lam) / (kk + 2.0);
        const double b0 = c[k] + alpha * b1 + beta_next * b2;
        b2 = b1;
        b1 = b0;
    }
    return b1;
}

double mono_eval(std::span<const double> c, double x) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

double ultra_eval(int lambda, std::size_t k, double x) {
    const double lam = lambda;
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = 2.0 * lam * x;
    for (std::size_t j = 1; j < k; ++j) {
        const double jj = static_cast<double>(j);
        const double next = (2.0 * (jj + lam) * x * cur - (jj + 2.0 * lam - 1.0) * prev) / (jj + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

Vector cheb_coefficients_from_values(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return {};
    // cos(pi k (2j+1) / (2n)) = table[k (2j+1) mod 4n]
    const std::size_t period = 4 * n;
    Vector table(period);
    for (std::size_t m = 0; m < period; ++m)
        table[m] = std::cos(std::numbers::pi * static_cast<double>(m) / (2.0 * static_cast<double>(n)));
    Vector c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += values[j] * table[(k * (2 * j + 1)) % period];
        c[k] = 2.0 * s / static_cast<double>(n);
    }
    c[0] *= 0.5;
    return c;
}

CoeffVector cheb_transform(const RealFunction& f, std::size_t n) {
    if (n == 0) throw Error("cheb_transform: n must be positive");
    Vector values(n);
    for (std::size_t j = 0; j < n; ++j)
        values[j] = f(std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) /
                               static_cast<double>(n)));
    return {Basis::Chebyshev, 0, cheb_coefficients_from_values(values)};
}

double QuadratureRule::integrate(const RealFunction& f) const {
    double s = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * f(nodes[j]);
    return s;
}

namespace {

// Forces exact mirror symmetry of a sorted rule about 0.
void symmetrize(QuadratureRule& rule) {
    const std::size_t m = rule.nodes.size();
    for (std::size_t i = 0; i < m / 2; ++i) {
        const std::size_t j = m - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t m) {
    if (m == 0) throw Error("gauss_legendre: m must be positive");
    QuadratureRule rule;
    rule.weight_kind = WeightKind::Legendre;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double md = static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (md + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 1; k < m; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk + 1.0) * x * p1 - kk * p0) / (kk + 1.0);
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_m(x), p0 = P_{m-1}(x)
            dp = m == 1 ? 1.0 : md * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
    QuadratureRule sorted = rule;
    for (std::size_t i = 0; i < m; ++i) {
        sorted.nodes[i] = rule.nodes[order[i]];
        sorted.weights[i] = rule.weights[order[i]];
    }
    symmetrize(sorted);
    return sorted;
}

TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diag,
                                             std::span<const double> offdiag) {
    const int m = static_cast<int>(diag.size());
    if (m == 0) return {};
    if (offdiag.size() + 1 != diag.size())
        throw DimensionMismatch("symmetric_tridiagonal_eigen: offdiag must have length m-1");
    Vector d(diag.begin(), diag.end());
    Vector e(static_cast<std::size_t>(m), 0.0);
    std::copy(offdiag.begin(), offdiag.end(), e.begin());
    Vector z(static_cast<std::size_t>(m), 0.0);
    z[0] = 1.0;
    constexpr double eps = 1e-14 * 0.01;  // comfortably below the 1e-14 target

    for (int l = 0; l < m; ++l) {
        int iter = 0;
        int mm = 0;
        do {
            for (mm = l; mm < m - 1; ++mm) {
                const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(e[mm]) <= std::max(eps * dd, std::numeric_limits<double>::min()))
                    break;
            }
            if (mm != l) {
                if (iter++ == 100) throw Error("symmetric_tridiagonal_eigen: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i = mm - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[mm] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[mm] = 0.0;
            }
        } while (mm != l);
    }
    return {std::move(d), std::move(z)};
}

QuadratureRule gauss_gegenbauer(std::size_t m, int lambda) {
    if (m == 0) throw Error("gauss_gegenbauer: m must be positive");
    if (lambda < 0) throw Error("gauss_gegenbauer: lambda must be non-negative");
    QuadratureRule rule;
    rule.weight_kind = WeightKind::Gegenbauer;
    rule.lambda = lambda;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double md = static_cast<double>(m);

    if (lambda == 0) {
        for (std::size_t j = 0; j < m; ++j) {
            // cos((2j'-1) pi / (2m)) written as a sine for exact symmetry, ascending.
            const double jj = static_cast<double>(j);
            rule.nodes[j] = -std::sin(std::numbers::pi * (md - 2.0 * jj - 1.0) / (2.0 * md));
            rule.weights[j] = std::numbers::pi / md;
        }
        symmetrize(rule);
        return rule;
    }

    const double lam = lambda;
    Vector diag(m, 0.0);
    Vector off(m - 1);
    for (std::size_t k = 1; k < m; ++k) {
        const double kk = static_cast<double>(k);
        off[k - 1] = std::sqrt(kk * (kk + 2.0 * lam - 1.0) / (4.0 * (kk + lam) * (kk + lam - 1.0)));
    }
    const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(lam + 0.5) / std::tgamma(lam + 1.0);
    const TridiagonalEigen eig = symmetric_tridiagonal_eigen(diag, off);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return eig.eigenvalues[a] < eig.eigenvalues[b];
    });
    for (std::size_t i = 0; i < m; ++i) {
        rule.nodes[i] = eig.eigenvalues[order[i]];
        const double v = eig.first_components[order[i]];
        rule.weights[i] = mu0 * v * v;
    }
    symmetrize(rule);
    return rule;
}

}  // namespace fop
