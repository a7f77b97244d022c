#include "fop/fem.hpp"

#include "fop/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace fop {

// ----------------------------------------------------------------- mesh / pp

UniformMesh::UniformMesh(std::size_t interior_nodes) : n_(interior_nodes) {
    if (n_ < 1) throw Error("UniformMesh: need at least one interior node");
}

std::size_t UniformMesh::cell_of(double x) const noexcept {
    const double pos = std::floor((x + 1.0) / dx());
    if (!(pos > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(pos), cells() - 1);
}

PiecewisePolynomial::PiecewisePolynomial(UniformMesh mesh, int degree)
    : PiecewisePolynomial(mesh, degree, 0, mesh.cells()) {}

PiecewisePolynomial::PiecewisePolynomial(UniformMesh mesh, int degree, std::size_t first_cell,
                                         std::size_t cell_count)
    : mesh_(mesh),
      degree_(degree),
      first_(first_cell),
      count_(cell_count),
      coeffs_(cell_count * static_cast<std::size_t>(degree + 1), 0.0) {
    if (degree < 0) throw Error("PiecewisePolynomial: negative degree");
    if (first_cell + cell_count > mesh.cells())
        throw Error("PiecewisePolynomial: support exceeds the mesh");
}

std::span<double> PiecewisePolynomial::cell_coeffs(std::size_t cell) {
    if (!in_support(cell)) throw Error("PiecewisePolynomial: cell outside support");
    const auto w = static_cast<std::size_t>(degree_ + 1);
    return {coeffs_.data() + (cell - first_) * w, w};
}

std::span<const double> PiecewisePolynomial::cell_coeffs(std::size_t cell) const {
    if (!in_support(cell)) throw Error("PiecewisePolynomial: cell outside support");
    const auto w = static_cast<std::size_t>(degree_ + 1);
    return {coeffs_.data() + (cell - first_) * w, w};
}

namespace {

// d^deriv/dt^deriv of sum_p c_p t^p
double poly_derivative(std::span<const double> c, double t, int deriv) {
    double acc = 0.0;
    const int deg = static_cast<int>(c.size()) - 1;
    for (int p = deg; p >= deriv; --p) {
        double f = 1.0;
        for (int i = 0; i < deriv; ++i) f *= p - i;
        acc = acc * t + f * c[static_cast<std::size_t>(p)];
    }
    return acc;
}

}  // namespace

double PiecewisePolynomial::eval_local(std::size_t cell, double t, int deriv) const {
    if (!in_support(cell)) return 0.0;
    return poly_derivative(cell_coeffs(cell), t, deriv);
}

double PiecewisePolynomial::eval(double x, int deriv) const {
    const std::size_t c = mesh_.cell_of(x);
    return eval_local(c, x - mesh_.node(c), deriv);
}

double PiecewisePolynomial::max_jump(int deriv) const {
    double worst = 0.0;
    const double h = mesh_.dx();
    for (std::size_t i = 1; i <= mesh_.interior_nodes(); ++i) {
        const double left = eval_local(i - 1, h, deriv);
        const double right = eval_local(i, 0.0, deriv);
        worst = std::max(worst, std::abs(left - right));
    }
    return worst;
}

double PiecewisePolynomial::node_scale(int deriv) const {
    double s = 0.0;
    const double h = mesh_.dx();
    for (std::size_t c = 0; c < mesh_.cells(); ++c) {
        s = std::max(s, std::abs(eval_local(c, 0.0, deriv)));
        s = std::max(s, std::abs(eval_local(c, h, deriv)));
    }
    return s;
}

bool PiecewisePolynomial::is_continuous(int m, double rel_tol) const {
    for (int r = 0; r <= m; ++r)
        if (max_jump(r) > rel_tol * node_scale(r)) return false;
    return true;
}

// -------------------------------------------------------------- Hermite basis

namespace {

// Reference cubics on s in [0, 1]: left value, left slope, right value, right slope.
constexpr double kShape[4][4] = {
    {1.0, 0.0, -3.0, 2.0},
    {0.0, 1.0, -2.0, 1.0},
    {0.0, 0.0, 3.0, -2.0},
    {0.0, 0.0, -1.0, 1.0},
};

// Adds weight * shape(a) to cubic t-coefficients.
void add_shape(std::span<double> out, int a, double weight, double h) {
    double scale = 1.0;
    for (std::size_t p = 0; p < 4; ++p) {
        out[p] += weight * kShape[a][p] / scale;
        scale *= h;
    }
}

// Global dof of local shape a in cell c, or -1 for an eliminated boundary dof.
long local_dof(const UniformMesh& mesh, std::size_t cell, int a) {
    const std::size_t node = a < 2 ? cell : cell + 1;
    if (node == 0 || node > mesh.interior_nodes()) return -1;
    return static_cast<long>(2 * (node - 1) + static_cast<std::size_t>(a % 2));
}

}  // namespace

PiecewisePolynomial hermite_function(const UniformMesh& mesh, std::size_t k) {
    if (k >= mesh.dofs()) throw Error("hermite_function: index out of range");
    const std::size_t node = k / 2 + 1;
    const int kind = static_cast<int>(k % 2);
    PiecewisePolynomial phi(mesh, 3, node - 1, 2);
    add_shape(phi.cell_coeffs(node - 1), 2 + kind, 1.0, mesh.dx());
    add_shape(phi.cell_coeffs(node), kind, 1.0, mesh.dx());
    return phi;
}

std::vector<PiecewisePolynomial> hermite_basis(const UniformMesh& mesh) {
    std::vector<PiecewisePolynomial> basis;
    basis.reserve(mesh.dofs());
    for (std::size_t k = 0; k < mesh.dofs(); ++k) basis.push_back(hermite_function(mesh, k));
    return basis;
}

PiecewisePolynomial hermite_combination(const UniformMesh& mesh, std::span<const double> coeffs) {
    if (coeffs.size() != mesh.dofs()) throw DimensionMismatch("hermite_combination: wrong length");
    PiecewisePolynomial u(mesh, 3);
    for (std::size_t c = 0; c < mesh.cells(); ++c)
        for (int a = 0; a < 4; ++a) {
            const long g = local_dof(mesh, c, a);
            if (g >= 0) add_shape(u.cell_coeffs(c), a, coeffs[static_cast<std::size_t>(g)], mesh.dx());
        }
    return u;
}

PiecewisePolynomial hermite_interpolant(const UniformMesh& mesh, const RealFunction& u,
                                        const RealFunction& du) {
    PiecewisePolynomial p(mesh, 3);
    const double h = mesh.dx();
    for (std::size_t c = 0; c < mesh.cells(); ++c) {
        const double xl = mesh.node(c);
        const double xr = mesh.node(c + 1);
        auto cc = p.cell_coeffs(c);
        add_shape(cc, 0, u(xl), h);
        add_shape(cc, 1, du(xl) * h, h);
        add_shape(cc, 2, u(xr), h);
        add_shape(cc, 3, du(xr) * h, h);
    }
    return p;
}

// ---------------------------------------------------------------- mass matrix

DenseMatrix mass_matrix(const UniformMesh& mesh) {
    const std::size_t n = mesh.interior_nodes();
    if (n < 2) throw Error("mass_matrix: need at least two interior nodes");
    constexpr double a[2][2] = {{26.0 / 35.0, 0.0}, {0.0, 2.0 / 105.0}};
    constexpr double b[2][2] = {{9.0 / 70.0, 13.0 / 420.0}, {-13.0 / 420.0, -1.0 / 140.0}};
    const double h = mesh.dx();
    DenseMatrix m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) {
                m(2 * i + r, 2 * i + c) = h * a[r][c];
                if (i + 1 < n) {
                    m(2 * (i + 1) + r, 2 * i + c) = h * b[r][c];
                    m(2 * i + c, 2 * (i + 1) + r) = h * b[r][c];
                }
            }
    return m;
}

double mass_delta() { return (3.0 + std::sqrt(13.0 / 3.0)) / 8.0; }

double mass_cond_bound() {
    const double d = mass_delta();
    return 39.0 * (1.0 + d) / (1.0 - d);
}

DenseMatrix scaled_mass_matrix(const UniformMesh& mesh) {
    DenseMatrix m = mass_matrix(mesh);
    const double d[2] = {std::sqrt(35.0 / 26.0), std::sqrt(105.0 / 2.0)};
    const double h = mesh.dx();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= d[i % 2] * d[j % 2] / h;
    return m;
}

// ------------------------------------------------------------------ problems

FourthOrderProblem biharmonic_problem() {
    FourthOrderProblem p;
    p.rhs = [](double) { return 24.0; };
    p.u = [](double x) { return (1.0 - x * x) * (1.0 - x * x); };
    p.du = [](double x) { return -4.0 * x * (1.0 - x * x); };
    p.d2u = [](double x) { return 12.0 * x * x - 4.0; };
    return p;
}

FourthOrderProblem l2_problem(double alpha) {
    constexpr double pi = std::numbers::pi;
    FourthOrderProblem p = biharmonic_problem();
    p.coeffs[0] = [alpha](double x) { return alpha * x / (1.0 + x * x); };
    p.coeffs[2] = [alpha](double x) { return alpha * std::cos(20.0 * pi * x * x * x); };
    p.coeffs[3] = [alpha](double x) { return alpha * std::sin(20.0 * pi * x); };
    p.da2 = [alpha](double x) {
        return -60.0 * pi * alpha * x * x * std::sin(20.0 * pi * x * x * x);
    };
    p.da3 = [alpha](double x) { return 20.0 * pi * alpha * std::cos(20.0 * pi * x); };
    const auto a0 = p.coeffs[0];
    const auto a2 = p.coeffs[2];
    const auto a3 = p.coeffs[3];
    p.rhs = [a0, a2, a3](double x) {
        const double u = (1.0 - x * x) * (1.0 - x * x);
        return 24.0 + a3(x) * 24.0 * x + a2(x) * (12.0 * x * x - 4.0) + a0(x) * u;
    };
    return p;
}

QuadratureRule default_fem_quadrature() { return gauss_legendre(11); }

// ------------------------------------------------------------------ assembly

namespace {

RealFunction derivative_of(const RealFunction& f, const RealFunction& df) {
    if (df) return df;
    if (!f) return {};
    return [f](double x) {
        constexpr double h = 1e-6;
        return (f(x + h) - f(x - h)) / (2.0 * h);
    };
}

double value_or_zero(const RealFunction& f, double x) { return f ? f(x) : 0.0; }

// Per-cell, per-point weights of the test functions in the bilinear form,
// with the quadrature weight folded in:
//   a(phi_a, u) restricted to the cell = sum_q w2 u'' + w1 u' + w0 u.
struct TestWeights {
    std::size_t points = 0;
    std::vector<double> t;  // local coordinates of the quadrature points
    std::vector<double> w0, w1, w2, load;  // indexed [(cell * 4 + a) * points + q]

    TestWeights(const FourthOrderProblem& p, const UniformMesh& mesh, const QuadratureRule& quad) {
        points = quad.size();
        const double h = mesh.dx();
        t.resize(points);
        std::vector<double> wq(points);
        for (std::size_t q = 0; q < points; ++q) {
            t[q] = 0.5 * h * (quad.nodes[q] + 1.0);
            wq[q] = 0.5 * h * quad.weights[q];
        }
        // Shape values and physical derivatives at the points.
        double sh[4][3][64];
        if (points > 64) throw Error("fem quadrature: at most 64 points per cell");
        for (int a = 0; a < 4; ++a) {
            std::array<double, 4> c{};
            add_shape(c, a, 1.0, h);
            for (std::size_t q = 0; q < points; ++q)
                for (int r = 0; r < 3; ++r) sh[a][r][q] = poly_derivative(c, t[q], r);
        }
        const RealFunction da2 = derivative_of(p.coeffs[2], p.da2);
        const RealFunction da3 = derivative_of(p.coeffs[3], p.da3);

        const std::size_t size = mesh.cells() * 4 * points;
        w0.assign(size, 0.0);
        w1.assign(size, 0.0);
        w2.assign(size, 0.0);
        load.assign(size, 0.0);
        for (std::size_t c = 0; c < mesh.cells(); ++c) {
            for (std::size_t q = 0; q < points; ++q) {
                const double x = mesh.node(c) + t[q];
                const double a0 = value_or_zero(p.coeffs[0], x);
                const double a1 = value_or_zero(p.coeffs[1], x);
                const double a2 = value_or_zero(p.coeffs[2], x);
                const double a3 = value_or_zero(p.coeffs[3], x);
                const double a2p = value_or_zero(da2, x);
                const double a3p = value_or_zero(da3, x);
                const double f = p.rhs ? p.rhs(x) : 0.0;
                for (int a = 0; a < 4; ++a) {
                    const double w = sh[a][0][q];
                    const double dw = sh[a][1][q];
                    const double d2w = sh[a][2][q];
                    const std::size_t idx = (c * 4 + static_cast<std::size_t>(a)) * points + q;
                    w2[idx] = wq[q] * (d2w - a3p * w - a3 * dw);
                    w1[idx] = wq[q] * (-a2p * w - a2 * dw + a1 * w);
                    w0[idx] = wq[q] * a0 * w;
                    load[idx] = wq[q] * w * f;
                }
            }
        }
    }
};

Vector assemble_load(const TestWeights& tw, const UniformMesh& mesh) {
    Vector b(mesh.dofs(), 0.0);
    for (std::size_t c = 0; c < mesh.cells(); ++c)
        for (int a = 0; a < 4; ++a) {
            const long g = local_dof(mesh, c, a);
            if (g < 0) continue;
            const std::size_t base = (c * 4 + static_cast<std::size_t>(a)) * tw.points;
            double s = 0.0;
            for (std::size_t q = 0; q < tw.points; ++q) s += tw.load[base + q];
            b[static_cast<std::size_t>(g)] += s;
        }
    return b;
}

}  // namespace

LinearSystem assemble_galerkin(const FourthOrderProblem& p, const UniformMesh& mesh,
                               const QuadratureRule& quad) {
    const TestWeights tw(p, mesh, quad);
    const double h = mesh.dx();
    const std::size_t nq = tw.points;
    // Trial shapes at the points.
    std::vector<double> trial(4 * 3 * nq);
    for (int b = 0; b < 4; ++b) {
        std::array<double, 4> c{};
        add_shape(c, b, 1.0, h);
        for (std::size_t q = 0; q < nq; ++q)
            for (int r = 0; r < 3; ++r)
                trial[(static_cast<std::size_t>(b) * 3 + static_cast<std::size_t>(r)) * nq + q] =
                    poly_derivative(c, tw.t[q], r);
    }

    DenseMatrix l(mesh.dofs(), mesh.dofs());
    for (std::size_t c = 0; c < mesh.cells(); ++c)
        for (int a = 0; a < 4; ++a) {
            const long ga = local_dof(mesh, c, a);
            if (ga < 0) continue;
            const std::size_t base = (c * 4 + static_cast<std::size_t>(a)) * nq;
            for (int b = 0; b < 4; ++b) {
                const long gb = local_dof(mesh, c, b);
                if (gb < 0) continue;
                const double* u0 = &trial[(static_cast<std::size_t>(b) * 3 + 0) * nq];
                const double* u1 = &trial[(static_cast<std::size_t>(b) * 3 + 1) * nq];
                const double* u2 = &trial[(static_cast<std::size_t>(b) * 3 + 2) * nq];
                double s = 0.0;
                for (std::size_t q = 0; q < nq; ++q)
                    s += tw.w2[base + q] * u2[q] + tw.w1[base + q] * u1[q] + tw.w0[base + q] * u0[q];
                l(static_cast<std::size_t>(ga), static_cast<std::size_t>(gb)) += s;
            }
        }
    return {std::move(l), assemble_load(tw, mesh)};
}

namespace {

/// hi + lo += x without losing the low-order bits.
void compensated_add(double& hi, double& lo, double x) {
    const double s = hi + x;
    const double bb = s - hi;
    lo += (hi - (s - bb)) + (x - bb);
    hi = s;
}

/// Coefficients 4..7 of the cell: the plain fourfold antiderivative in t.
void particular_part(const PiecewisePolynomial& phi, std::size_t c, std::span<double> o) {
    if (!phi.in_support(c)) return;
    const auto in = phi.cell_coeffs(c);
    for (std::size_t p = 0; p < in.size(); ++p) {
        const double pp = static_cast<double>(p);
        o[p + 4] = in[p] / ((pp + 1.0) * (pp + 2.0) * (pp + 3.0) * (pp + 4.0));
    }
}

/// r-th derivative at t of sum_{p > r} o_p t^p restricted to p >= from.
double tail_derivative(std::span<const double> o, int r, int from, double t) {
    double v = 0.0;
    for (int p = 7; p >= from; --p) {
        double f = 1.0;
        for (int i = 0; i < r; ++i) f *= p - i;
        v = v * t + f * o[static_cast<std::size_t>(p)];
    }
    for (int p = from; p > r; --p) v *= t;
    return v;
}

void store_cubic(std::span<double> o, const double* hi, const double* lo) {
    o[0] = hi[0] + lo[0];
    o[1] = hi[1] + lo[1];
    o[2] = (hi[2] + lo[2]) / 2.0;
    o[3] = (hi[3] + lo[3]) / 6.0;
}

/// Zero data at -1, swept to the right, then clamped at +1 with
/// p(x) = alpha (x+1)^2 + beta (x+1)^3, which leaves -1 untouched.
void sweep_from_left(const PiecewisePolynomial& phi, PiecewisePolynomial& out) {
    const UniformMesh& mesh = phi.mesh();
    const double h = mesh.dx();
    // Derivatives 0..3 at the left end of the current cell, as hi + lo.
    double hi[4] = {0.0, 0.0, 0.0, 0.0};
    double lo[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t c = 0; c < mesh.cells(); ++c) {
        auto o = out.cell_coeffs(c);
        store_cubic(o, hi, lo);
        particular_part(phi, c, o);
        for (int r = 0; r < 4; ++r) compensated_add(hi[r], lo[r], tail_derivative(o, r, r + 1, h));
    }
    double v[2];
    for (int r = 0; r < 2; ++r) v[r] = hi[r] + lo[r];
    const double beta = (v[0] - v[1]) / 4.0;
    const double alpha = (-v[0] - 8.0 * beta) / 4.0;
    for (std::size_t c = 0; c < mesh.cells(); ++c) {
        const double s = static_cast<double>(c) * h;
        auto o = out.cell_coeffs(c);
        o[0] += alpha * s * s + beta * s * s * s;
        o[1] += 2.0 * alpha * s + 3.0 * beta * s * s;
        o[2] += alpha + 3.0 * beta * s;
        o[3] += beta;
    }
}

/// Mirror image: zero data at +1, swept to the left, then clamped at -1 with
/// p(x) = alpha (1-x)^2 + beta (1-x)^3.
void sweep_from_right(const PiecewisePolynomial& phi, PiecewisePolynomial& out) {
    const UniformMesh& mesh = phi.mesh();
    const double h = mesh.dx();
    // Derivatives 0..3 at the right end of the current cell, as hi + lo.
    double hi[4] = {0.0, 0.0, 0.0, 0.0};
    double lo[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t c = mesh.cells(); c-- > 0;) {
        auto o = out.cell_coeffs(c);
        particular_part(phi, c, o);
        double d[8];
        for (int j = 0; j < 4; ++j) d[j] = hi[j] + lo[j];
        for (int j = 4; j < 8; ++j) d[j] = tail_derivative(o, j, j, h);
        // Taylor expansion about t = h, evaluated at t = 0.
        for (int r = 0; r < 4; ++r) {
            double fact = 1.0, pw = 1.0;
            for (int j = r + 1; j < 8; ++j) {
                fact *= j - r;
                pw *= -h;
                compensated_add(hi[r], lo[r], d[j] * pw / fact);
            }
        }
        store_cubic(o, hi, lo);
    }
    double v[2];
    for (int r = 0; r < 2; ++r) v[r] = hi[r] + lo[r];
    const double beta = (v[0] + v[1]) / 4.0;
    const double alpha = (-v[0] - 8.0 * beta) / 4.0;
    const std::size_t cells = mesh.cells();
    for (std::size_t c = 0; c < cells; ++c) {
        const double s = static_cast<double>(cells - c) * h;
        auto o = out.cell_coeffs(c);
        o[0] += alpha * s * s + beta * s * s * s;
        o[1] += -2.0 * alpha * s - 3.0 * beta * s * s;
        o[2] += alpha + 3.0 * beta * s;
        o[3] += -beta;
    }
}

}  // namespace

PiecewisePolynomial fourfold_integrate(const PiecewisePolynomial& phi) {
    if (phi.degree() > 3) throw Error("fourfold_integrate: input degree must be at most 3");
    PiecewisePolynomial out(phi.mesh(), 7);
    // Zero data at one end, correction at the other. Starting from the end
    // far from the support keeps the correction small.
    if (2 * phi.first_cell() + phi.cell_count() < phi.mesh().cells())
        sweep_from_right(phi, out);
    else
        sweep_from_left(phi, out);
    return out;
}

LinearSystem assemble_fop(const FourthOrderProblem& p, const UniformMesh& mesh,
                          const QuadratureRule& quad) {
    const TestWeights tw(p, mesh, quad);
    const std::size_t nq = tw.points;
    const std::size_t dofs = mesh.dofs();
    // Power tables for degree-7 cell polynomials and their first two derivatives.
    std::vector<double> pw(3 * nq * 8, 0.0);
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t k = 0; k < 8; ++k) {
            const double t = tw.t[q];
            const double kk = static_cast<double>(k);
            pw[(0 * nq + q) * 8 + k] = std::pow(t, kk);
            pw[(1 * nq + q) * 8 + k] = k >= 1 ? kk * std::pow(t, kk - 1.0) : 0.0;
            pw[(2 * nq + q) * 8 + k] = k >= 2 ? kk * (kk - 1.0) * std::pow(t, kk - 2.0) : 0.0;
        }

    DenseMatrix l(dofs, dofs);
    std::vector<double> vals(3 * nq);
    for (std::size_t k = 0; k < dofs; ++k) {
        const PiecewisePolynomial big_phi = fourfold_integrate(hermite_function(mesh, k));
        for (std::size_t c = 0; c < mesh.cells(); ++c) {
            const auto co = big_phi.cell_coeffs(c);
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t q = 0; q < nq; ++q) {
                    const double* row = &pw[(r * nq + q) * 8];
                    double s = 0.0;
                    for (std::size_t m = 0; m < 8; ++m) s += row[m] * co[m];
                    vals[r * nq + q] = s;
                }
            for (int a = 0; a < 4; ++a) {
                const long ga = local_dof(mesh, c, a);
                if (ga < 0) continue;
                const std::size_t base = (c * 4 + static_cast<std::size_t>(a)) * nq;
                double s = 0.0;
                for (std::size_t q = 0; q < nq; ++q)
                    s += tw.w2[base + q] * vals[2 * nq + q] + tw.w1[base + q] * vals[nq + q] +
                         tw.w0[base + q] * vals[q];
                l(static_cast<std::size_t>(ga), k) += s;
            }
        }
    }
    return {std::move(l), assemble_load(tw, mesh)};
}

// -------------------------------------------------------------------- errors

ErrorNorms error_norms(const PiecewisePolynomial& uh, const RealFunction& u,
                       const RealFunction& du, const RealFunction& d2u,
                       const QuadratureRule& quad) {
    const UniformMesh& mesh = uh.mesh();
    const double h = mesh.dx();
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    double n0 = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t c = 0; c < mesh.cells(); ++c)
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const double t = 0.5 * h * (quad.nodes[q] + 1.0);
            const double w = 0.5 * h * quad.weights[q];
            const double x = mesh.node(c) + t;
            const double u0 = u(x), u1 = du(x), u2 = d2u(x);
            const double d0 = u0 - uh.eval_local(c, t, 0);
            const double d1 = u1 - uh.eval_local(c, t, 1);
            const double d2 = u2 - uh.eval_local(c, t, 2);
            e0 += w * d0 * d0;
            e1 += w * d1 * d1;
            e2 += w * d2 * d2;
            n0 += w * u0 * u0;
            n1 += w * u1 * u1;
            n2 += w * u2 * u2;
        }
    return {std::sqrt((e0 + e1 + e2) / (n0 + n1 + n2)), std::sqrt(e0 / n0)};
}

// -------------------------------------------------------------------- solves

namespace {

Vector solve_or_throw(const LinearSystem& sys, const char* what) {
    if (!sys.matrix.all_finite()) throw SingularSystem(std::string(what) + ": non-finite system matrix");
    try {
        return lu_solve(sys.matrix, sys.rhs);
    } catch (const SingularMatrix& e) {
        throw SingularSystem(std::string(what) + ": " + e.what());
    }
}

}  // namespace

PiecewisePolynomial solve_unpreconditioned(const FourthOrderProblem& p, const UniformMesh& mesh,
                                           const QuadratureRule& quad) {
    const Vector x = solve_or_throw(assemble_galerkin(p, mesh, quad), "fem");
    return hermite_combination(mesh, x);
}

PiecewisePolynomial solve_fop(const FourthOrderProblem& p, const UniformMesh& mesh,
                              const QuadratureRule& quad) {
    const Vector v = solve_or_throw(assemble_fop(p, mesh, quad), "fem fop");
    return fourfold_integrate(hermite_combination(mesh, v));
}

SolveReport matrix_precond_baseline(const FourthOrderProblem& p, const UniformMesh& mesh,
                                    const BaselineOptions& options) {
    if (mesh.interior_nodes() < 2) throw Error("matrix_precond_baseline: n must be at least 2");
    const QuadratureRule quad = default_fem_quadrature();
    FourthOrderProblem bih;
    bih.rhs = [](double) { return 0.0; };
    auto stiffness = std::make_shared<const LuFactorization>([&] {
        try {
            return LuFactorization(assemble_galerkin(bih, mesh, quad).matrix);
        } catch (const SingularMatrix& e) {
            throw SingularSystem(std::string("baseline stiffness: ") + e.what());
        }
    }());
    LinearSystem sys = assemble_galerkin(p, mesh, quad);
    auto l = std::make_shared<const DenseMatrix>(std::move(sys.matrix));

    const LinearMap a = LinearMap::from_matrix(l);
    const LinearMap precond{mesh.dofs(), [stiffness](std::span<const double> x) {
                                return stiffness->solve(x);
                            }};
    double tol = options.tol;
    if (!(tol > 0.0)) {
        const Vector x = solve_or_throw({*l, sys.rhs}, "baseline direct");
        Vector r = matvec(*l, x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= sys.rhs[i];
        tol = 4.0 * norm2(r) / norm2(sys.rhs);
    }
    GmresReport g = gmres(a, sys.rhs, &precond, tol, options.max_iters);

    SolveReport report;
    report.residual_history = std::move(g.residual_history);
    report.iterations = g.iterations;
    report.converged = g.converged;
    if (options.compute_cond) {
        // L K^{-1} = (K^{-T} L^T)^T and K is symmetric.
        const std::size_t m = mesh.dofs();
        DenseMatrix prod(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            const Vector row = stiffness->solve(l->row(i));
            std::copy(row.begin(), row.end(), prod.row(i).begin());
        }
        report.cond = cond2(prod);
    }
    if (p.has_exact())
        report.errors = error_norms(hermite_combination(mesh, g.solution), p.u, p.du, p.d2u, quad);
    report.solution = std::move(g.solution);
    return report;
}

}  // namespace fop
