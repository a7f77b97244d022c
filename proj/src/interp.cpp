#include "fop/interp.hpp"

#include "fop/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace fop {

NodeSet chebyshev_nodes(std::size_t n) {
    if (n == 0) throw Error("chebyshev_nodes: n must be positive");
    NodeSet nodes;
    nodes.points.resize(n);
    const double nd = static_cast<double>(n);
    for (std::size_t j = 1; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        // cos((2j-1) pi / (2n)) = sin((n - 2j + 1) pi / (2n)), exactly odd in j <-> n+1-j
        nodes.points[j - 1] = std::sin(std::numbers::pi * (nd - 2.0 * jd + 1.0) / (2.0 * nd));
    }
    return nodes;
}

InterpolationMatrix interpolation_matrix(const NodeSet& nodes, Basis basis) {
    const std::size_t n = nodes.size();
    if (n == 0) throw Error("interpolation_matrix: empty node set");
    Vector sorted = nodes.points;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < n; ++i)
        if (sorted[i] - sorted[i - 1] <= 1e-14)
            throw DuplicateNodes("interpolation_matrix: nodes closer than 1e-14");

    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = nodes.points[j];
        switch (basis) {
            case Basis::Monomial: {
                double p = 1.0;
                for (std::size_t k = 0; k < n; ++k) {
                    l(j, k) = p;
                    p *= x;
                }
                break;
            }
            case Basis::Chebyshev: {
                double prev = 1.0;
                double cur = x;
                l(j, 0) = 1.0;
                if (n > 1) l(j, 1) = x;
                for (std::size_t k = 2; k < n; ++k) {
                    const double next = 2.0 * x * cur - prev;
                    prev = cur;
                    cur = next;
                    l(j, k) = cur;
                }
                break;
            }
            default:
                throw Error("interpolation_matrix: basis must be Monomial or Chebyshev");
        }
    }
    return {std::move(l), basis, nodes};
}

DenseMatrix cheb_to_mono(std::size_t n) {
    if (n == 0) throw Error("cheb_to_mono: n must be positive");
    DenseMatrix c(n, n);
    c(0, 0) = 1.0;
    if (n > 1) c(1, 1) = 1.0;
    for (std::size_t k = 2; k < n; ++k) {
        // T_k = 2x T_{k-1} - T_{k-2}
        for (std::size_t m = 1; m < n; ++m) c(k, m) += 2.0 * c(k - 1, m - 1);
        for (std::size_t m = 0; m < n; ++m) c(k, m) -= c(k - 2, m);
    }
    return c;
}

InterpErrors interp_draw(std::size_t n, Rng& rng) {
    if (n < 2) throw Error("interp_experiment: n must be at least 2");
    constexpr double tol = std::numeric_limits<double>::epsilon();

    Vector q(n);
    for (double& v : q) v = rng.normal();

    const NodeSet nodes = chebyshev_nodes(n);
    Vector b(n);
    for (std::size_t j = 0; j < n; ++j) b[j] = mono_eval(q, nodes.points[j]);

    auto l_mono = std::make_shared<const DenseMatrix>(interpolation_matrix(nodes, Basis::Monomial).matrix);
    auto l_cheb = std::make_shared<const DenseMatrix>(interpolation_matrix(nodes, Basis::Chebyshev).matrix);
    auto ct = std::make_shared<const DenseMatrix>(cheb_to_mono(n).transpose());

    const LinearMap a_mono = LinearMap::from_matrix(l_mono);
    const LinearMap a_cheb = LinearMap::from_matrix(l_cheb);
    const LinearMap precond = LinearMap::from_matrix(ct);

    InterpErrors errors;
    errors.err_mono = relative_error(gmres(a_mono, b, nullptr, tol, n).solution, q);
    errors.err_mono_precond = relative_error(gmres(a_mono, b, &precond, tol, n).solution, q);
    const Vector reference = lu_solve(*l_cheb, b);
    errors.err_cheb = relative_error(gmres(a_cheb, b, nullptr, tol, n).solution, reference);
    return errors;
}

InterpErrors interp_experiment(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return interp_draw(n, rng);
}

InterpAverages interp_experiment_averaged(std::size_t n, std::size_t draws, std::uint64_t seed) {
    if (draws == 0) throw Error("interp_experiment_averaged: draws must be positive");
    Rng rng(seed);
    InterpErrors sum;
    InterpErrors log_sum;
    // Floor keeps the geometric mean defined if a draw is solved exactly.
    const auto safe_log = [](double v) { return std::log(std::max(v, 1e-300)); };
    for (std::size_t d = 0; d < draws; ++d) {
        const InterpErrors e = interp_draw(n, rng);
        sum.err_mono += e.err_mono;
        sum.err_mono_precond += e.err_mono_precond;
        sum.err_cheb += e.err_cheb;
        log_sum.err_mono += safe_log(e.err_mono);
        log_sum.err_mono_precond += safe_log(e.err_mono_precond);
        log_sum.err_cheb += safe_log(e.err_cheb);
    }
    const double k = static_cast<double>(draws);
    InterpAverages avg;
    avg.arithmetic = {sum.err_mono / k, sum.err_mono_precond / k, sum.err_cheb / k};
    avg.geometric = {std::exp(log_sum.err_mono / k), std::exp(log_sum.err_mono_precond / k),
                     std::exp(log_sum.err_cheb / k)};
    return avg;
}

}  // namespace fop
