#pragma once

#include "fop/linalg.hpp"
#include "fop/orthopoly.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fop {

/// Constraint u^{(derivative)}(point) = value with point = -1 or +1.
struct BoundaryCondition {
    double point = 1.0;
    int derivative = 0;
    double value = 0.0;
};

/// u^{(N)} + a_{N-1} u^{(N-1)} + ... + a_0 u = f on [-1, 1] with N
/// boundary constraints. The leading coefficient is 1.
struct BVProblem {
    int order = 0;
    /// a_0 .. a_{N-1}; an empty function is treated as zero.
    std::vector<RealFunction> coeffs;
    RealFunction rhs;
    std::vector<BoundaryCondition> bcs;
};

enum class SpectralMethod { Unprec, Ultra, UltraR };

/// Boundary-bordered coefficient-space system; the first N rows are the
/// boundary rows.
struct SpectralSystem {
    DenseMatrix matrix;
    Vector rhs;
    std::size_t n = 0;
    bool preconditioned = false;
    /// Set when the right diagonal scaling has been folded into `matrix`.
    std::optional<Vector> diag_R;
};

/// Chebyshev to C^{(lambda)} lambda-fold differentiation; single
/// superdiagonal at offset lambda holding 2^{lambda-1}(lambda-1)! * k.
BandedMatrix diff_matrix(int lambda, std::size_t n);

/// C^{(lambda)} to C^{(lambda+1)} conversion (lambda = 0: Chebyshev to C^{(1)}).
BandedMatrix conversion_matrix(int lambda, std::size_t n);

/// Chebyshev expansion of a coefficient function, chopped where the
/// coefficients fall below 1e-14 of the largest.
struct ResolvedFunction {
    Vector coeffs;  // length degree + 1
    std::size_t degree = 0;
};

/// Throws UnresolvedCoefficient when no transform up to 8193 points has a
/// tail below 1e-14 relative.
ResolvedFunction resolve_chebyshev(const RealFunction& a);

/// Multiplication by `a` acting on C^{(lambda)} coefficients (Chebyshev for
/// lambda = 0). Bandwidth is the resolved degree of a, capped at n - 1.
BandedMatrix mult_matrix(const RealFunction& a, int lambda, std::size_t n);
BandedMatrix mult_matrix(const ResolvedFunction& a, int lambda, std::size_t n);

/// Dense upper-triangular Chebyshev coefficient differentiation matrix.
DenseMatrix cheb_diff_dense(std::size_t n);

/// T_k^{(d)}(point) for point = +-1.
double cheb_endpoint_derivative(std::size_t k, int d, double point);

/// (B T_0, ..., B T_{n-1}) for one boundary functional.
Vector boundary_row(const BoundaryCondition& bc, std::size_t n);

/// Square n x n ultraspherical operator
///   D_N + S_{N-1} M_{N-1}(a_{N-1}) D_{N-1} + ... + S_{N-1}...S_0 M_0(a_0),
/// built from banded factors at a padded working size so every row is the
/// exact projection of the infinite operator.
BandedMatrix ultraspherical_operator(const BVProblem& p, std::size_t n);

/// Maps Chebyshev coefficients to C^{(lambda)} coefficients by S_{lambda-1}...S_0.
CoeffVector to_ultraspherical(const CoeffVector& cheb, int lambda);

SpectralSystem assemble_unpreconditioned(const BVProblem& p, std::size_t n);
SpectralSystem assemble_ultraspherical(const BVProblem& p, std::size_t n);

/// diag(1 (N times), 1/N, 1/(N+1), ..., 1/(n-1)) / (2^{N-1} (N-1)!)
Vector right_diag_R(int order, std::size_t n);

/// Ultraspherical system with the right diagonal preconditioner folded in.
SpectralSystem assemble_ultraspherical_scaled(const BVProblem& p, std::size_t n);

SpectralSystem assemble(const BVProblem& p, std::size_t n, SpectralMethod method);

/// Chebyshev coefficients of the approximate solution. For UltraR the
/// solved vector is mapped back through R. Throws SingularSystem.
CoeffVector solve_bvp(const BVProblem& p, std::size_t n, SpectralMethod method);

/// u'' + 10 u' + 100 x u = f, u(+-1) = 0, with f = 1.
BVProblem example_spectral_problem();

}  // namespace fop
