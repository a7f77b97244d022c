#include "fop/linalg.hpp"

#include "fop/error.hpp"
#include "fop/rng.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fop {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DimensionMismatch(what);
}

double dot(std::span<const double> x, std::span<const double> y) {
    return cblas_ddot(static_cast<int>(x.size()), x.data(), 1, y.data(), 1);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    cblas_daxpy(static_cast<int>(x.size()), alpha, x.data(), 1, y.data(), 1);
}

}  // namespace

// ---------------------------------------------------------------- DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    require(rows >= 1 && cols >= 1, "DenseMatrix: empty shape");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(rows >= 1 && cols >= 1, "DenseMatrix: empty shape");
    require(data_.size() == rows * cols, "DenseMatrix: entry count does not match shape");
    if (!all_finite()) throw Error("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, "DenseMatrix::block out of range");
    DenseMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>((r0 + i) * cols_ + c0), nc,
                    b.row(i).begin());
    return b;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols() == b.rows(), "matrix product: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()),
                static_cast<int>(b.cols()), static_cast<int>(a.cols()), 1.0,
                a.entries().data(), static_cast<int>(a.cols()), b.entries().data(),
                static_cast<int>(b.cols()), 0.0, c.entries().data(), static_cast<int>(c.cols()));
    return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum: shapes differ");
    DenseMatrix c = a;
    axpy(1.0, b.entries(), c.entries());
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference: shapes differ");
    DenseMatrix c = a;
    axpy(-1.0, b.entries(), c.entries());
    return c;
}

DenseMatrix operator*(double alpha, const DenseMatrix& a) {
    DenseMatrix c = a;
    for (double& v : c.entries()) v *= alpha;
    return c;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    Vector y(a.rows(), 0.0);
    cblas_dgemv(CblasRowMajor, CblasNoTrans, static_cast<int>(a.rows()),
                static_cast<int>(a.cols()), 1.0, a.entries().data(), static_cast<int>(a.cols()),
                x.data(), 1, 0.0, y.data(), 1);
    return y;
}

// --------------------------------------------------------------- BandedMatrix

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n),
      lower_(std::min(lower, n - 1)),
      upper_(std::min(upper, n - 1)),
      band_(n * (lower_ + upper_ + 1), 0.0) {
    require(n >= 1, "BandedMatrix: empty");
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const noexcept {
    if (!in_band(i, j)) return 0.0;
    return band_[i * (lower_ + upper_ + 1) + (j + lower_ - i)];
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || !in_band(i, j))
        throw Error("BandedMatrix::at: (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") outside the band");
    return band_[i * (lower_ + upper_ + 1) + (j + lower_ - i)];
}

DenseMatrix BandedMatrix::densify() const {
    DenseMatrix d(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= lower_ ? i - lower_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + upper_);
        for (std::size_t j = j0; j <= j1; ++j) d(i, j) = (*this)(i, j);
    }
    return d;
}

BandedMatrix BandedMatrix::from_dense(const DenseMatrix& a, std::size_t lower, std::size_t upper) {
    require(a.square(), "BandedMatrix::from_dense: matrix not square");
    BandedMatrix b(a.rows(), lower, upper);
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= b.lower_ ? i - b.lower_ : 0;
        const std::size_t j1 = std::min(n - 1, i + b.upper_);
        for (std::size_t j = j0; j <= j1; ++j) b.at(i, j) = a(i, j);
    }
    return b;
}

Vector BandedMatrix::apply(std::span<const double> x) const {
    require(x.size() == n_, "BandedMatrix::apply: dimension mismatch");
    Vector y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= lower_ ? i - lower_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + upper_);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

BandedMatrix operator*(const BandedMatrix& a, const BandedMatrix& b) {
    require(a.size() == b.size(), "banded product: dimension mismatch");
    const std::size_t n = a.size();
    BandedMatrix c(n, a.lower() + b.lower(), a.upper() + b.upper());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k0 = i >= a.lower() ? i - a.lower() : 0;
        const std::size_t k1 = std::min(n - 1, i + a.upper());
        for (std::size_t k = k0; k <= k1; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const std::size_t j0 = k >= b.lower() ? k - b.lower() : 0;
            const std::size_t j1 = std::min(n - 1, k + b.upper());
            for (std::size_t j = j0; j <= j1; ++j) c.at(i, j) += aik * b(k, j);
        }
    }
    return c;
}

BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b) {
    require(a.size() == b.size(), "banded sum: dimension mismatch");
    const std::size_t n = a.size();
    BandedMatrix c(n, std::max(a.lower(), b.lower()), std::max(a.upper(), b.upper()));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= c.lower() ? i - c.lower() : 0;
        const std::size_t j1 = std::min(n - 1, i + c.upper());
        for (std::size_t j = j0; j <= j1; ++j) c.at(i, j) = a(i, j) + b(i, j);
    }
    return c;
}

BandedMatrix operator*(double alpha, const BandedMatrix& a) {
    BandedMatrix c = a;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= a.lower() ? i - a.lower() : 0;
        const std::size_t j1 = std::min(n - 1, i + a.upper());
        for (std::size_t j = j0; j <= j1; ++j) c.at(i, j) *= alpha;
    }
    return c;
}

// ------------------------------------------------------------------ LinearMap

LinearMap LinearMap::from_matrix(DenseMatrix a) {
    return from_matrix(std::make_shared<const DenseMatrix>(std::move(a)));
}

LinearMap LinearMap::from_matrix(std::shared_ptr<const DenseMatrix> a) {
    require(a->square(), "LinearMap::from_matrix: matrix not square");
    const std::size_t n = a->rows();
    return LinearMap{n, [a = std::move(a)](std::span<const double> x) { return matvec(*a, x); }};
}

// ------------------------------------------------------------------------ LU

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)), pivots_(lu_.rows()) {
    require(lu_.square(), "lu: matrix not square");
    const int n = static_cast<int>(lu_.rows());
    const lapack_int info =
        LAPACKE_dgetrf(LAPACK_ROW_MAJOR, n, n, lu_.entries().data(), n, pivots_.data());
    if (info > 0)
        throw SingularMatrix("lu: zero pivot in column " + std::to_string(info - 1));
    if (info < 0) throw Error("lu: dgetrf argument error");
}

Vector LuFactorization::solve(std::span<const double> b) const {
    require(b.size() == lu_.rows(), "lu solve: right-hand side length mismatch");
    Vector x(b.begin(), b.end());
    const int n = static_cast<int>(lu_.rows());
    const lapack_int info = LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', n, 1, lu_.entries().data(), n,
                                           pivots_.data(), x.data(), 1);
    if (info != 0) throw Error("lu: dgetrs failed");
    return x;
}

Vector lu_solve(const DenseMatrix& a, std::span<const double> b) {
    require(a.square(), "lu_solve: matrix not square");
    require(b.size() == a.rows(), "lu_solve: right-hand side length mismatch");
    return LuFactorization(a).solve(b);
}

Vector banded_solve(const BandedMatrix& a, std::span<const double> b) {
    const std::size_t n = a.size();
    require(b.size() == n, "banded_solve: right-hand side length mismatch");
    const std::size_t kl = a.lower();
    const std::size_t ku = a.upper();
    const std::size_t ldab = 2 * kl + ku + 1;
    // LAPACK general band storage, column-major, with kl extra rows for fill-in.
    std::vector<double> ab(ldab * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i0 = j >= ku ? j - ku : 0;
        const std::size_t i1 = std::min(n - 1, j + kl);
        for (std::size_t i = i0; i <= i1; ++i) ab[j * ldab + (kl + ku + i - j)] = a(i, j);
    }
    std::vector<lapack_int> ipiv(n);
    Vector x(b.begin(), b.end());
    const lapack_int info =
        LAPACKE_dgbsv(LAPACK_COL_MAJOR, static_cast<int>(n), static_cast<int>(kl),
                      static_cast<int>(ku), 1, ab.data(), static_cast<int>(ldab), ipiv.data(),
                      x.data(), static_cast<int>(n));
    if (info > 0)
        throw SingularMatrix("banded_solve: zero pivot in column " + std::to_string(info - 1));
    if (info < 0) throw Error("banded_solve: dgbsv argument error");
    return x;
}

// --------------------------------------------------------------------- GMRES

GmresReport gmres(const LinearMap& a, std::span<const double> b, const LinearMap* right_precond,
                  double tol, std::size_t max_iters, const GmresObserver& observer) {
    const std::size_t n = b.size();
    require(a.dim == n, "gmres: operator dimension mismatch");
    require(right_precond == nullptr || right_precond->dim == n,
            "gmres: preconditioner dimension mismatch");
    if (!(tol > 0.0)) throw Error("gmres: tolerance must be positive");

    GmresReport report;
    report.solution.assign(n, 0.0);
    const double beta = norm2(b);
    if (beta == 0.0) {
        report.residual_history.push_back(0.0);
        report.converged = true;
        if (observer) observer(0, report.solution);
        return report;
    }
    report.residual_history.push_back(1.0);
    if (observer) observer(0, report.solution);

    std::vector<Vector> basis;
    basis.reserve(std::min(max_iters, n) + 1);
    Vector v0(b.begin(), b.end());
    for (double& v : v0) v /= beta;
    basis.push_back(std::move(v0));

    // Columns of the triangularized Hessenberg matrix.
    std::vector<Vector> r_cols;
    std::vector<double> cs;
    std::vector<double> sn;
    std::vector<double> g{beta};

    double best = 1.0;
    for (std::size_t k = 0; k < max_iters; ++k) {
        const Vector z = right_precond ? (*right_precond)(basis[k]) : basis[k];
        Vector w = a(z);

        Vector h(k + 2, 0.0);
        for (std::size_t i = 0; i <= k; ++i) {
            h[i] = dot(w, basis[i]);
            axpy(-h[i], basis[i], w);
        }
        const double h_next = norm2(w);
        h[k + 1] = h_next;

        for (std::size_t i = 0; i < k; ++i) {
            const double t = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        const double rho = std::hypot(h[k], h[k + 1]);
        const double c = rho == 0.0 ? 1.0 : h[k] / rho;
        const double s = rho == 0.0 ? 0.0 : h[k + 1] / rho;
        cs.push_back(c);
        sn.push_back(s);
        h[k] = rho;
        h[k + 1] = 0.0;
        g.push_back(-s * g[k]);
        g[k] = c * g[k];
        r_cols.push_back(std::move(h));

        // Back substitution for the least-squares coefficients.
        Vector y(k + 1, 0.0);
        for (std::size_t ii = k + 1; ii-- > 0;) {
            double acc = g[ii];
            for (std::size_t j = ii + 1; j <= k; ++j) acc -= r_cols[j][ii] * y[j];
            y[ii] = r_cols[ii][ii] == 0.0 ? 0.0 : acc / r_cols[ii][ii];
        }
        Vector t(n, 0.0);
        for (std::size_t i = 0; i <= k; ++i) axpy(y[i], basis[i], t);
        Vector x = right_precond ? (*right_precond)(t) : std::move(t);

        Vector r = a(x);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        const double res = norm2(r) / beta;
        if (res < best) {
            best = res;
            report.solution = std::move(x);
        }
        report.residual_history.push_back(best);
        if (observer) observer(k + 1, report.solution);

        if (best <= tol) {
            report.converged = true;
            break;
        }
        if (h_next == 0.0) {
            report.breakdown = true;
            break;
        }
        for (double& v : w) v /= h_next;
        basis.push_back(std::move(w));
    }
    report.iterations = report.residual_history.size() - 1;
    report.converged = report.residual_history.back() <= tol;
    return report;
}

// ------------------------------------------------------------------ spectra

Vector singular_values(const DenseMatrix& a) {
    DenseMatrix work = a;
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    Vector s(static_cast<std::size_t>(std::min(m, n)));
    Vector superb(s.size() > 1 ? s.size() - 1 : 1);
    double dummy = 0.0;
    const lapack_int info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'N', 'N', m, n,
                                           work.entries().data(), n, s.data(), &dummy, 1,
                                           &dummy, 1, superb.data());
    if (info != 0) throw Error("singular_values: dgesvd did not converge");
    return s;
}

Vector symmetric_eigenvalues(const DenseMatrix& a) {
    require(a.square(), "symmetric_eigenvalues: matrix not square");
    DenseMatrix work = a;
    const int n = static_cast<int>(a.rows());
    Vector w(a.rows());
    const lapack_int info =
        LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', n, work.entries().data(), n, w.data());
    if (info != 0) throw Error("symmetric_eigenvalues: dsyev did not converge");
    return w;
}

double cond2(const DenseMatrix& a) {
    require(a.square(), "cond2: matrix not square");
    const Vector s = singular_values(a);
    if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
    return s.front() / s.back();
}

double norm2(const DenseMatrix& a) { return singular_values(a).front(); }

double norm2(std::span<const double> x) {
    return cblas_dnrm2(static_cast<int>(x.size()), x.data(), 1);
}

double relative_error(std::span<const double> x, std::span<const double> reference) {
    require(x.size() == reference.size(), "relative_error: length mismatch");
    Vector d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - reference[i];
    return norm2(d) / norm2(reference);
}

// ------------------------------------------------------ prescribed-kappa test

PrescribedSystem prescribed_cond_matrix(std::size_t n, double kappa, std::uint64_t seed) {
    if (!(kappa >= 1.0) || !std::isfinite(kappa))
        throw InvalidKappa("prescribed_cond_matrix: kappa must be finite and >= 1");
    if (n < 2) throw Error("prescribed_cond_matrix: n must be at least 2");

    Rng rng(seed);
    std::vector<double> g(n * n);
    for (double& v : g) v = rng.normal();
    Vector x_true(n);
    for (double& v : x_true) v = rng.normal();

    const int ni = static_cast<int>(n);
    Vector tau(n);
    if (LAPACKE_dgeqrf(LAPACK_ROW_MAJOR, ni, ni, g.data(), ni, tau.data()) != 0)
        throw Error("prescribed_cond_matrix: dgeqrf failed");
    std::vector<double> sign(n);
    for (std::size_t j = 0; j < n; ++j) sign[j] = g[j * n + j] < 0.0 ? -1.0 : 1.0;
    if (LAPACKE_dorgqr(LAPACK_ROW_MAJOR, ni, ni, ni, g.data(), ni, tau.data()) != 0)
        throw Error("prescribed_cond_matrix: dorgqr failed");
    auto u = std::make_shared<DenseMatrix>(n, n, std::move(g));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) (*u)(i, j) *= sign[j];

    auto s = std::make_shared<Vector>(n);
    for (std::size_t i = 0; i < n; ++i)
        (*s)[i] = std::pow(kappa, static_cast<double>(i) / static_cast<double>(n - 1));

    DenseMatrix us = *u;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) us(i, j) *= (*s)[j];
    DenseMatrix l = us * u->transpose();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (l(i, j) + l(j, i));
            l(i, j) = avg;
            l(j, i) = avg;
        }

    LinearMap inverse{n, [u, s](std::span<const double> x) {
                          Vector y(u->cols(), 0.0);
                          const int m = static_cast<int>(u->rows());
                          cblas_dgemv(CblasRowMajor, CblasTrans, m, m, 1.0, u->entries().data(),
                                      m, x.data(), 1, 0.0, y.data(), 1);
                          for (std::size_t i = 0; i < y.size(); ++i) y[i] /= (*s)[i];
                          return matvec(*u, y);
                      }};
    return {std::move(l), std::move(inverse), std::move(x_true)};
}

}  // namespace fop
