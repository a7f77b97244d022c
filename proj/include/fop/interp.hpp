#pragma once

#include "fop/linalg.hpp"
#include "fop/orthopoly.hpp"
#include "fop/rng.hpp"

#include <cstddef>
#include <cstdint>

namespace fop {

struct NodeSet {
    Vector points;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Interpolation matrix L[j, k] = phi_k(x_j).
struct InterpolationMatrix {
    DenseMatrix matrix;
    Basis basis = Basis::Monomial;
    NodeSet nodes;
};

/// First-kind Chebyshev points cos((2j-1) pi / (2n)), j = 1..n (decreasing).
NodeSet chebyshev_nodes(std::size_t n);

/// Throws DuplicateNodes when two nodes are closer than 1e-14, and
/// fop::Error for bases other than Monomial and Chebyshev.
InterpolationMatrix interpolation_matrix(const NodeSet& nodes, Basis basis);

/// C[k, m] = coefficient of x^m in T_k, so monomial coefficients are C^T u.
DenseMatrix cheb_to_mono(std::size_t n);

/// Relative 2-norm errors of one interpolation draw.
struct InterpErrors {
    double err_mono = 0.0;
    double err_mono_precond = 0.0;
    double err_cheb = 0.0;
};

/// One draw: monomial coefficients q ~ N(0, 1), data sampled at the
/// Chebyshev points, then
///   L_mu x = b            (GMRES, no preconditioner)
///   L_mu C^T v = b        (GMRES, right preconditioner C^T)
///   L_T x_T = b           (GMRES, checked against an LU solve of the same system)
/// with tolerance 2^-52 and at most n iterations.
InterpErrors interp_draw(std::size_t n, Rng& rng);

/// Single draw with a fresh generator.
InterpErrors interp_experiment(std::size_t n, std::uint64_t seed);

struct InterpAverages {
    InterpErrors arithmetic;
    InterpErrors geometric;
};

/// `draws` successive draws from one seeded stream.
InterpAverages interp_experiment_averaged(std::size_t n, std::size_t draws, std::uint64_t seed);

}  // namespace fop
