#pragma once

#include "fop/linalg.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fop {

using RealFunction = std::function<double(double)>;

enum class Basis { Monomial, Chebyshev, Ultraspherical };

/// Coefficients of a polynomial in a named basis. `order` is the
/// ultraspherical parameter lambda and is ignored for the other bases.
struct CoeffVector {
    Basis basis = Basis::Chebyshev;
    int order = 0;
    Vector coeffs;

    /// Evaluates the represented polynomial at x.
    [[nodiscard]] double operator()(double x) const;
};

/// sum_k c_k T_k(x) by Clenshaw recurrence.
double cheb_eval(std::span<const double> c, double x);

/// sum_k c_k C_k^{(lambda)}(x) by Clenshaw recurrence.
double ultra_series_eval(int lambda, std::span<const double> c, double x);

/// Horner evaluation of sum_k c_k x^k.
double mono_eval(std::span<const double> c, double x);

/// C_k^{(lambda)}(x) from the three-term recurrence
///   C_{k+1} = (2(k+lambda) x C_k - (k+2lambda-1) C_{k-1}) / (k+1),
/// with C_0 = 1, C_1 = 2 lambda x.
double ultra_eval(int lambda, std::size_t k, double x);

/// Chebyshev coefficients of the degree-(n-1) interpolant of f at the n
/// first-kind Chebyshev points.
CoeffVector cheb_transform(const RealFunction& f, std::size_t n);

/// Same transform applied to samples f(cos(pi (j + 1/2) / n)), j = 0..n-1.
Vector cheb_coefficients_from_values(std::span<const double> values);

enum class WeightKind { Legendre, Gegenbauer };

struct QuadratureRule {
    Vector nodes;    // strictly increasing, inside (-1, 1)
    Vector weights;  // positive
    WeightKind weight_kind = WeightKind::Legendre;
    /// Gegenbauer parameter; the weight is (1 - x^2)^{lambda - 1/2}.
    int lambda = 0;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }

    /// sum_j w_j f(x_j)
    [[nodiscard]] double integrate(const RealFunction& f) const;
};

/// m-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(std::size_t m);

/// m-point Gauss rule for the weight (1 - x^2)^{lambda - 1/2}.
/// lambda = 0 is the Chebyshev weight and uses the closed-form nodes; lambda >= 1
/// goes through the Golub-Welsch eigenproblem.
QuadratureRule gauss_gegenbauer(std::size_t m, int lambda);

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix (implicit-shift QL). `diag` has length m and `offdiag` length m-1.
struct TridiagonalEigen {
    Vector eigenvalues;
    Vector first_components;
};
TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diag,
                                             std::span<const double> offdiag);

}  // namespace fop
