#pragma once

#include "fop/linalg.hpp"
#include "fop/orthopoly.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fop {

/// Uniform mesh of [-1, 1] with n interior nodes and n + 1 cells.
class UniformMesh {
public:
    explicit UniformMesh(std::size_t interior_nodes);

    [[nodiscard]] std::size_t interior_nodes() const noexcept { return n_; }
    [[nodiscard]] std::size_t cells() const noexcept { return n_ + 1; }
    [[nodiscard]] std::size_t dofs() const noexcept { return 2 * n_; }
    [[nodiscard]] double dx() const noexcept { return 2.0 / static_cast<double>(n_ + 1); }
    /// x_i = -1 + i dx for i = 0..n+1; cell c spans [x_c, x_{c+1}].
    [[nodiscard]] double node(std::size_t i) const noexcept {
        return -1.0 + static_cast<double>(i) * dx();
    }
    [[nodiscard]] std::size_t cell_of(double x) const noexcept;

    bool operator==(const UniformMesh&) const = default;

private:
    std::size_t n_;
};

/// Per-cell polynomials in the local coordinate t = x - x_c in [0, dx],
/// stored as monomial coefficients. Cells outside [first_cell,
/// first_cell + cell_count) are identically zero.
class PiecewisePolynomial {
public:
    /// Zero polynomial supported on every cell.
    PiecewisePolynomial(UniformMesh mesh, int degree);
    PiecewisePolynomial(UniformMesh mesh, int degree, std::size_t first_cell,
                        std::size_t cell_count);

    [[nodiscard]] const UniformMesh& mesh() const noexcept { return mesh_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] std::size_t first_cell() const noexcept { return first_; }
    [[nodiscard]] std::size_t cell_count() const noexcept { return count_; }
    [[nodiscard]] bool in_support(std::size_t cell) const noexcept {
        return cell >= first_ && cell < first_ + count_;
    }

    /// Coefficients of a supported cell (degree + 1 entries).
    [[nodiscard]] std::span<double> cell_coeffs(std::size_t cell);
    [[nodiscard]] std::span<const double> cell_coeffs(std::size_t cell) const;

    /// d^deriv/dt^deriv of the cell polynomial at local coordinate t.
    [[nodiscard]] double eval_local(std::size_t cell, double t, int deriv = 0) const;

    /// Value of the deriv-th derivative at x. At an interior node the right
    /// cell is used.
    [[nodiscard]] double eval(double x, int deriv = 0) const;

    /// Largest |jump| of the deriv-th derivative over interior nodes.
    [[nodiscard]] double max_jump(int deriv) const;

    /// Largest one-sided |value| of the deriv-th derivative over all nodes.
    [[nodiscard]] double node_scale(int deriv) const;

    /// Derivatives 0..m jump by less than rel_tol times their node scale.
    [[nodiscard]] bool is_continuous(int m, double rel_tol = 1e-11) const;

private:
    UniformMesh mesh_;
    int degree_;
    std::size_t first_;
    std::size_t count_;
    std::vector<double> coeffs_;
};

/// Cubic Hermite basis functions, ordered (value, slope) per interior
/// node. Slope-type functions have unit slope in the cell reference
/// coordinate s = t / dx, i.e. physical slope 1 / dx.
std::vector<PiecewisePolynomial> hermite_basis(const UniformMesh& mesh);

/// Hermite basis function k alone.
PiecewisePolynomial hermite_function(const UniformMesh& mesh, std::size_t k);

/// sum_k coeffs[k] phi_k as a full-support piecewise cubic.
PiecewisePolynomial hermite_combination(const UniformMesh& mesh, std::span<const double> coeffs);

/// Piecewise-cubic interpolant matching value and slope of u at every node.
PiecewisePolynomial hermite_interpolant(const UniformMesh& mesh, const RealFunction& u,
                                        const RealFunction& du);

/// Gram matrix of the Hermite basis from the closed-form element blocks
///   A = diag(26/35, 2/105), B = [[9/70, 13/420], [-13/420, -1/140]],
/// scaled by dx. Node i+1's block row holds B against node i.
DenseMatrix mass_matrix(const UniformMesh& mesh);

/// Gerschgorin-style radius delta = (3 + sqrt(13/3)) / 8 and the bound
/// 39 (1 + delta) / (1 - delta) on cond2 of the mass matrix.
double mass_delta();
double mass_cond_bound();

/// D M D with D = diag(sqrt(35/26), sqrt(105/2), ...): the unit-diagonal mass matrix.
DenseMatrix scaled_mass_matrix(const UniformMesh& mesh);

/// u'''' + a3 u''' + a2 u'' + a1 u' + a0 u = f with u(+-1) = u'(+-1) = 0.
struct FourthOrderProblem {
    /// a0..a3; empty functions are zero.
    std::array<RealFunction, 4> coeffs;
    /// Analytic a2' and a3'. Central differences (h = 1e-6) when absent.
    RealFunction da2;
    RealFunction da3;
    RealFunction rhs;
    /// Exact solution with its first two derivatives, for error reporting.
    RealFunction u;
    RealFunction du;
    RealFunction d2u;

    [[nodiscard]] bool has_exact() const noexcept { return u && du && d2u; }
};

/// u'''' = 24, exact solution (1 - x^2)^2.
FourthOrderProblem biharmonic_problem();

/// d^4 + alpha sin(20 pi x) d^3 + alpha cos(20 pi x^3) d^2 + alpha x / (1 + x^2),
/// with f chosen so that u = (1 - x^2)^2.
FourthOrderProblem l2_problem(double alpha = 200.0);

/// Gauss-Legendre rule applied per cell; 11 points unless stated otherwise.
QuadratureRule default_fem_quadrature();

struct LinearSystem {
    DenseMatrix matrix;
    Vector rhs;
};

/// L[j, k] = a(phi_j, phi_k), b[j] = (phi_j, f), with
///   a(w, u) = (w'' - (a3 w)', u'') + (-(a2 w)' + a1 w, u') + (a0 w, u).
LinearSystem assemble_galerkin(const FourthOrderProblem& p, const UniformMesh& mesh,
                               const QuadratureRule& quad);

/// Phi with Phi'''' = phi cellwise, C^3 across interior nodes and
/// Phi(+-1) = Phi'(+-1) = 0.
PiecewisePolynomial fourfold_integrate(const PiecewisePolynomial& phi);

/// L~[j, k] = a(phi_j, Phi_k) with Phi_k = fourfold_integrate(phi_k); the
/// right-hand side is the unpreconditioned one.
LinearSystem assemble_fop(const FourthOrderProblem& p, const UniformMesh& mesh,
                          const QuadratureRule& quad);

struct ErrorNorms {
    double rel_H2 = 0.0;
    double rel_L2 = 0.0;
};

ErrorNorms error_norms(const PiecewisePolynomial& uh, const RealFunction& u,
                       const RealFunction& du, const RealFunction& d2u,
                       const QuadratureRule& quad);

/// Hermite-coefficient solution of the unpreconditioned system.
PiecewisePolynomial solve_unpreconditioned(const FourthOrderProblem& p, const UniformMesh& mesh,
                                           const QuadratureRule& quad);

/// Solves L~ v = b and reconstructs sum_k v_k Phi_k.
PiecewisePolynomial solve_fop(const FourthOrderProblem& p, const UniformMesh& mesh,
                              const QuadratureRule& quad);

struct SolveReport {
    Vector solution;
    Vector residual_history;
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<double> cond;
    std::optional<ErrorNorms> errors;
};

struct BaselineOptions {
    /// Non-positive selects 4 times the relative residual of a direct LU
    /// solve of the same system, the level a backward-stable solve reaches.
    double tol = 0.0;
    std::size_t max_iters = 200;
    bool compute_cond = false;
};

/// GMRES on the unpreconditioned system with the LU-inverted biharmonic
/// stiffness matrix as right preconditioner. Errors are filled in when the
/// problem carries an exact solution.
SolveReport matrix_precond_baseline(const FourthOrderProblem& p, const UniformMesh& mesh,
                                    const BaselineOptions& options = {});

}  // namespace fop
