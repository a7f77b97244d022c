#include "fop/spectral.hpp"

#include "fop/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fop {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// 2^{lambda-1} (lambda-1)!
double diff_scale(int lambda) { return std::ldexp(factorial(lambda - 1), lambda - 1); }

BandedMatrix crop(const BandedMatrix& a, std::size_t n) {
    BandedMatrix c(n, a.lower(), a.upper());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= c.lower() ? i - c.lower() : 0;
        const std::size_t j1 = std::min(n - 1, i + c.upper());
        for (std::size_t j = j0; j <= j1; ++j) c.at(i, j) = a(i, j);
    }
    return c;
}

void validate(const BVProblem& p, std::size_t n) {
    if (p.order < 1) throw Error("BVProblem: order must be at least 1");
    const auto order = static_cast<std::size_t>(p.order);
    if (p.coeffs.size() > order)
        throw Error("BVProblem: more coefficient functions than the order allows");
    if (p.bcs.size() != order)
        throw Error("BVProblem: expected " + std::to_string(order) + " boundary conditions");
    for (const auto& bc : p.bcs)
        if ((bc.point != 1.0 && bc.point != -1.0) || bc.derivative < 0)
            throw Error("BVProblem: boundary conditions must sit at -1 or +1");
    if (!p.rhs) throw Error("BVProblem: missing right-hand side");
    if (n <= 2 * order) throw Error("spectral assembly: n must exceed 2N");

    // Boundary rows must be independent at n = 2N.
    DenseMatrix block(order, 2 * order);
    for (std::size_t r = 0; r < order; ++r) {
        const Vector row = boundary_row(p.bcs[r], 2 * order);
        std::copy(row.begin(), row.end(), block.row(r).begin());
    }
    const Vector s = singular_values(block);
    if (s.back() <= 1e-12 * s.front())
        throw Error("BVProblem: boundary conditions are linearly dependent");
}

bool is_zero(const ResolvedFunction& r) {
    return std::all_of(r.coeffs.begin(), r.coeffs.end(), [](double c) { return c == 0.0; });
}

std::vector<ResolvedFunction> resolve_coefficients(const BVProblem& p) {
    std::vector<ResolvedFunction> out;
    for (const auto& a : p.coeffs)
        out.push_back(a ? resolve_chebyshev(a) : ResolvedFunction{{0.0}, 0});
    return out;
}

}  // namespace

BandedMatrix diff_matrix(int lambda, std::size_t n) {
    if (lambda < 1) throw Error("diff_matrix: lambda must be at least 1");
    const auto lam = static_cast<std::size_t>(lambda);
    if (n <= lam) throw Error("diff_matrix: n must exceed lambda");
    BandedMatrix d(n, 0, lam);
    const double scale = diff_scale(lambda);
    for (std::size_t k = lam; k < n; ++k) d.at(k - lam, k) = scale * static_cast<double>(k);
    return d;
}

BandedMatrix conversion_matrix(int lambda, std::size_t n) {
    if (lambda < 0) throw Error("conversion_matrix: lambda must be non-negative");
    if (n == 0) throw Error("conversion_matrix: n must be positive");
    BandedMatrix s(n, 0, 2);
    const double lam = lambda;
    for (std::size_t j = 0; j < n; ++j) {
        const double jj = static_cast<double>(j);
        if (lambda == 0) {
            s.at(j, j) = j == 0 ? 1.0 : 0.5;
            if (j + 2 < n) s.at(j, j + 2) = -0.5;
        } else {
            s.at(j, j) = j == 0 ? 1.0 : lam / (lam + jj);
            if (j + 2 < n) s.at(j, j + 2) = -lam / (lam + jj + 2.0);
        }
    }
    return s;
}

ResolvedFunction resolve_chebyshev(const RealFunction& a) {
    constexpr double chop = 1e-14;
    for (std::size_t m = 17; m <= 8193; m = 2 * m - 1) {
        const Vector c = cheb_transform(a, m).coeffs;
        double scale = 0.0;
        for (double v : c) scale = std::max(scale, std::abs(v));
        if (!std::isfinite(scale))
            throw UnresolvedCoefficient("coefficient function is not finite on [-1, 1]");
        if (scale == 0.0) return {{0.0}, 0};
        double tail = 0.0;
        for (std::size_t k = m / 2; k < m; ++k) tail = std::max(tail, std::abs(c[k]));
        if (tail >= chop * scale) continue;
        std::size_t degree = 0;
        for (std::size_t k = 0; k < m; ++k)
            if (std::abs(c[k]) > chop * scale) degree = k;
        return {Vector(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(degree) + 1), degree};
    }
    throw UnresolvedCoefficient("coefficient function not resolved by 8193 Chebyshev points");
}

BandedMatrix mult_matrix(const RealFunction& a, int lambda, std::size_t n) {
    return mult_matrix(resolve_chebyshev(a), lambda, n);
}

BandedMatrix mult_matrix(const ResolvedFunction& a, int lambda, std::size_t n) {
    if (lambda < 0) throw Error("mult_matrix: lambda must be non-negative");
    if (n == 0) throw Error("mult_matrix: n must be positive");
    const std::size_t d = a.degree;
    const std::size_t band = std::min(d, n - 1);
    BandedMatrix m(n, band, band);

    if (d == 0) {
        for (std::size_t j = 0; j < n; ++j) m.at(j, j) = a.coeffs[0];
        return m;
    }

    if (lambda == 0) {
        // 2 T_i T_k = T_{i+k} + T_{|i-k|}
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i <= d; ++i) {
                const double half = 0.5 * a.coeffs[i];
                if (i + k < n) m.at(i + k, k) += half;
                const std::size_t low = i > k ? i - k : k - i;
                if (low < n) m.at(low, k) += half;
            }
        }
        return m;
    }

    // Galerkin entries (C_j, a C_k) / (C_j, C_j) under (1-x^2)^{lambda-1/2}.
    // The rule is exact for degree 2(n-1) + d.
    const QuadratureRule rule = gauss_gegenbauer(n + d / 2 + 2, lambda);
    const std::size_t q = rule.size();
    const double lam = lambda;
    std::vector<double> table(n * q);  // table[j * q + i] = C_j(x_i)
    for (std::size_t i = 0; i < q; ++i) {
        const double x = rule.nodes[i];
        double prev = 1.0;
        double cur = 2.0 * lam * x;
        table[i] = prev;
        if (n > 1) table[q + i] = cur;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double jj = static_cast<double>(j);
            const double next = (2.0 * (jj + lam) * x * cur - (jj + 2.0 * lam - 1.0) * prev) / (jj + 1.0);
            prev = cur;
            cur = next;
            table[(j + 1) * q + i] = cur;
        }
    }
    std::vector<double> wa(q);
    for (std::size_t i = 0; i < q; ++i) wa[i] = rule.weights[i] * cheb_eval(a.coeffs, rule.nodes[i]);

    for (std::size_t j = 0; j < n; ++j) {
        const double* cj = &table[j * q];
        double norm = 0.0;
        for (std::size_t i = 0; i < q; ++i) norm += rule.weights[i] * cj[i] * cj[i];
        const std::size_t k0 = j >= band ? j - band : 0;
        const std::size_t k1 = std::min(n - 1, j + band);
        for (std::size_t k = k0; k <= k1; ++k) {
            const double* ck = &table[k * q];
            double s = 0.0;
            for (std::size_t i = 0; i < q; ++i) s += wa[i] * cj[i] * ck[i];
            m.at(j, k) = s / norm;
        }
    }
    return m;
}

DenseMatrix cheb_diff_dense(std::size_t n) {
    DenseMatrix d(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; k += 2)
            d(j, k) = (j == 0 ? 1.0 : 2.0) * static_cast<double>(k);
    return d;
}

double cheb_endpoint_derivative(std::size_t k, int d, double point) {
    const double kk = static_cast<double>(k);
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= (kk * kk - static_cast<double>(i * i)) / (2.0 * i + 1.0);
    if (point < 0.0 && (k + static_cast<std::size_t>(d)) % 2 == 1) v = -v;
    return v;
}

Vector boundary_row(const BoundaryCondition& bc, std::size_t n) {
    Vector row(n);
    for (std::size_t k = 0; k < n; ++k) row[k] = cheb_endpoint_derivative(k, bc.derivative, bc.point);
    return row;
}

BandedMatrix ultraspherical_operator(const BVProblem& p, std::size_t n) {
    const int order = p.order;
    const std::vector<ResolvedFunction> coeffs = resolve_coefficients(p);
    std::size_t dmax = 0;
    for (const auto& c : coeffs) dmax = std::max(dmax, c.degree);
    dmax = std::min(dmax, n);
    const std::size_t nw = n + dmax + 2 * static_cast<std::size_t>(order);

    BandedMatrix op = diff_matrix(order, nw);
    for (int j = 0; j < order && static_cast<std::size_t>(j) < coeffs.size(); ++j) {
        if (is_zero(coeffs[static_cast<std::size_t>(j)])) continue;
        BandedMatrix term = mult_matrix(coeffs[static_cast<std::size_t>(j)], j, nw);
        if (j > 0) term = term * diff_matrix(j, nw);
        for (int s = j; s < order; ++s) term = conversion_matrix(s, nw) * term;
        op = op + term;
    }
    return crop(op, n);
}

CoeffVector to_ultraspherical(const CoeffVector& cheb, int lambda) {
    if (cheb.basis != Basis::Chebyshev) throw Error("to_ultraspherical: expected Chebyshev input");
    Vector c = cheb.coeffs;
    for (int s = 0; s < lambda; ++s) c = conversion_matrix(s, c.size()).apply(c);
    return {lambda == 0 ? Basis::Chebyshev : Basis::Ultraspherical, lambda, std::move(c)};
}

namespace {

SpectralSystem border(const BVProblem& p, std::size_t n, const DenseMatrix& interior,
                      std::span<const double> interior_rhs) {
    const auto order = static_cast<std::size_t>(p.order);
    DenseMatrix a(n, n);
    Vector b(n);
    for (std::size_t r = 0; r < order; ++r) {
        const Vector row = boundary_row(p.bcs[r], n);
        std::copy(row.begin(), row.end(), a.row(r).begin());
        b[r] = p.bcs[r].value;
    }
    for (std::size_t r = 0; r + order < n; ++r) {
        std::copy_n(interior.row(r).begin(), n, a.row(r + order).begin());
        b[r + order] = interior_rhs[r];
    }
    return {std::move(a), std::move(b), n, false, std::nullopt};
}

}  // namespace

SpectralSystem assemble_unpreconditioned(const BVProblem& p, std::size_t n) {
    validate(p, n);
    const std::vector<ResolvedFunction> coeffs = resolve_coefficients(p);
    const DenseMatrix d = cheb_diff_dense(n);

    std::vector<DenseMatrix> powers{DenseMatrix::identity(n)};
    for (int j = 1; j <= p.order; ++j) powers.push_back(powers.back() * d);

    DenseMatrix l = powers[static_cast<std::size_t>(p.order)];
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (is_zero(coeffs[j])) continue;
        const DenseMatrix m = mult_matrix(coeffs[j], 0, n).densify();
        l = l + m * powers[j];
    }
    const Vector f = cheb_transform(p.rhs, n).coeffs;
    return border(p, n, l, f);
}

SpectralSystem assemble_ultraspherical(const BVProblem& p, std::size_t n) {
    validate(p, n);
    const BandedMatrix op = ultraspherical_operator(p, n);
    const std::size_t nw = n + 2 * static_cast<std::size_t>(p.order);
    const CoeffVector f = to_ultraspherical(cheb_transform(p.rhs, nw), p.order);
    SpectralSystem sys = border(p, n, op.densify(), f.coeffs);
    sys.preconditioned = true;
    return sys;
}

Vector right_diag_R(int order, std::size_t n) {
    if (order < 1) throw Error("right_diag_R: order must be at least 1");
    const auto nn = static_cast<std::size_t>(order);
    if (n <= nn) throw Error("right_diag_R: n must exceed N");
    const double scale = 1.0 / diff_scale(order);
    Vector r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = scale * (k < nn ? 1.0 : 1.0 / static_cast<double>(k));
    return r;
}

SpectralSystem assemble_ultraspherical_scaled(const BVProblem& p, std::size_t n) {
    SpectralSystem sys = assemble_ultraspherical(p, n);
    Vector r = right_diag_R(p.order, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sys.matrix(i, j) *= r[j];
    sys.diag_R = std::move(r);
    return sys;
}

SpectralSystem assemble(const BVProblem& p, std::size_t n, SpectralMethod method) {
    switch (method) {
        case SpectralMethod::Unprec: return assemble_unpreconditioned(p, n);
        case SpectralMethod::Ultra: return assemble_ultraspherical(p, n);
        case SpectralMethod::UltraR: return assemble_ultraspherical_scaled(p, n);
    }
    throw Error("assemble: unknown method");
}

CoeffVector solve_bvp(const BVProblem& p, std::size_t n, SpectralMethod method) {
    const SpectralSystem sys = assemble(p, n, method);
    Vector x;
    try {
        x = lu_solve(sys.matrix, sys.rhs);
    } catch (const SingularMatrix& e) {
        throw SingularSystem(std::string("solve_bvp: ") + e.what());
    }
    if (sys.diag_R)
        for (std::size_t k = 0; k < n; ++k) x[k] *= (*sys.diag_R)[k];
    return {Basis::Chebyshev, 0, std::move(x)};
}

BVProblem example_spectral_problem() {
    BVProblem p;
    p.order = 2;
    p.coeffs = {[](double x) { return 100.0 * x; }, [](double) { return 10.0; }};
    p.rhs = [](double) { return 1.0; };
    p.bcs = {{-1.0, 0, 0.0}, {1.0, 0, 0.0}};
    return p;
}

}  // namespace fop
