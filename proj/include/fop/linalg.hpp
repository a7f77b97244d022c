#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace fop {

using Vector = std::vector<double>;

/// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;

    /// Zero matrix of the given shape.
    DenseMatrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major entries. Throws DimensionMismatch if the
    /// length disagrees with the shape and fop::Error on non-finite entries.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> diag);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] std::span<double> entries() noexcept { return data_; }
    [[nodiscard]] std::span<const double> entries() const noexcept { return data_; }

    [[nodiscard]] DenseMatrix transpose() const;
    [[nodiscard]] bool all_finite() const noexcept;

    /// Copy of the rectangular block [r0, r0+nr) x [c0, c0+nc).
    [[nodiscard]] DenseMatrix block(std::size_t r0, std::size_t c0,
                                    std::size_t nr, std::size_t nc) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double alpha, const DenseMatrix& a);

Vector matvec(const DenseMatrix& a, std::span<const double> x);

/// Square matrix with `lower` subdiagonals and `upper` superdiagonals.
/// Entries outside the band are structurally zero.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t lower() const noexcept { return lower_; }
    [[nodiscard]] std::size_t upper() const noexcept { return upper_; }

    [[nodiscard]] bool in_band(std::size_t i, std::size_t j) const noexcept {
        return j + lower_ >= i && j <= i + upper_;
    }

    /// Zero outside the band.
    double operator()(std::size_t i, std::size_t j) const noexcept;

    /// Mutable access; throws fop::Error outside the band.
    double& at(std::size_t i, std::size_t j);

    [[nodiscard]] DenseMatrix densify() const;

    /// Copies the band of `a`; entries outside it are discarded.
    static BandedMatrix from_dense(const DenseMatrix& a, std::size_t lower, std::size_t upper);

    [[nodiscard]] Vector apply(std::span<const double> x) const;

private:
    std::size_t n_ = 0;
    std::size_t lower_ = 0;
    std::size_t upper_ = 0;
    std::vector<double> band_;  // row i holds columns i-lower .. i+upper
};

BandedMatrix operator*(const BandedMatrix& a, const BandedMatrix& b);
BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b);
BandedMatrix operator*(double alpha, const BandedMatrix& a);

/// Abstract matrix-vector product on R^n.
struct LinearMap {
    std::size_t dim = 0;
    std::function<Vector(std::span<const double>)> action;

    Vector operator()(std::span<const double> x) const { return action(x); }

    static LinearMap from_matrix(DenseMatrix a);
    static LinearMap from_matrix(std::shared_ptr<const DenseMatrix> a);
};

/// Reusable partial-pivoting LU factorization.
class LuFactorization {
public:
    /// Throws SingularMatrix when a pivot column is exactly zero.
    explicit LuFactorization(DenseMatrix a);

    [[nodiscard]] std::size_t size() const noexcept { return lu_.rows(); }
    [[nodiscard]] Vector solve(std::span<const double> b) const;

private:
    DenseMatrix lu_;
    std::vector<int> pivots_;
};

Vector lu_solve(const DenseMatrix& a, std::span<const double> b);

Vector banded_solve(const BandedMatrix& a, std::span<const double> b);

struct GmresReport {
    Vector solution;
    /// Relative true residuals ||b - A x_k|| / ||b||, k = 0..iterations.
    Vector residual_history;
    std::size_t iterations = 0;
    bool converged = false;
    /// Arnoldi produced an exactly zero vector before convergence.
    bool breakdown = false;
};

/// Called after every iteration with the iteration index and the iterate
/// that the residual history entry refers to.
using GmresObserver = std::function<void(std::size_t, std::span<const double>)>;

/// Full (unrestarted) GMRES from a zero initial guess with optional right
/// preconditioning; the returned solution is in the original variables.
///
/// The residual of each iteration is recomputed from the reconstructed
/// iterate. If it does not improve on the best iterate so far, the best
/// iterate is retained, so the history is non-increasing.
GmresReport gmres(const LinearMap& a, std::span<const double> b,
                  const LinearMap* right_precond, double tol, std::size_t max_iters,
                  const GmresObserver& observer = {});

/// Singular values in decreasing order (LAPACK dgesvd, bidiagonalization + QR).
Vector singular_values(const DenseMatrix& a);

/// Eigenvalues of a symmetric matrix in increasing order.
Vector symmetric_eigenvalues(const DenseMatrix& a);

/// 2-norm condition number; +inf when the smallest singular value is 0.
double cond2(const DenseMatrix& a);

double norm2(const DenseMatrix& a);

double norm2(std::span<const double> x);

/// ||x - reference||_2 / ||reference||_2
double relative_error(std::span<const double> x, std::span<const double> reference);

struct PrescribedSystem {
    DenseMatrix matrix;
    /// Applies U S^{-1} U^T.
    LinearMap inverse;
    Vector x_true;
};

/// Symmetric L = U S U^T with U a seeded random orthogonal matrix and
/// singular values spaced geometrically from 1 to kappa.
PrescribedSystem prescribed_cond_matrix(std::size_t n, double kappa, std::uint64_t seed);

}  // namespace fop
