#include "fop/experiments.hpp"

#include "fop/error.hpp"
#include "fop/fem.hpp"
#include "fop/interp.hpp"
#include "fop/spectral.hpp"
#include "fop/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace fop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double as_double(std::size_t n) { return static_cast<double>(n); }

}  // namespace

std::vector<std::size_t> geometric_sweep(std::size_t n_min, std::size_t n_max) {
    if (n_min == 0 || n_max < n_min) throw ConfigError("need 0 < n-min <= n-max");
    std::vector<std::size_t> ns;
    for (std::size_t n = n_min; n <= n_max; n *= 2) ns.push_back(n);
    return ns;
}

Table run_gmres_demo(const ExperimentConfig& cfg) {
    if (cfg.kappas.empty()) throw ConfigError("gmres-demo: kappa list is empty");
    const std::size_t n = cfg.n_max;
    if (n < 2) throw ConfigError("gmres-demo: n must be at least 2");
    Table t;
    t.columns = {"kappa", "iteration", "rel_error_unprec", "rel_error_precond", "rel_error_direct"};
    for (const double kappa : cfg.kappas) {
        if (!(kappa >= 1.0)) throw ConfigError("gmres-demo: kappa must be at least 1");
        const PrescribedSystem sys = prescribed_cond_matrix(n, kappa, cfg.seed);
        const Vector b = matvec(sys.matrix, sys.x_true);
        const LinearMap a = LinearMap::from_matrix(sys.matrix);

        auto trace = [&](const LinearMap* precond) {
            Vector errs;
            gmres(a, b, precond, cfg.gmres_tol, n, [&](std::size_t, std::span<const double> x) {
                errs.push_back(relative_error(x, sys.x_true));
            });
            return errs;
        };
        const Vector unprec = trace(nullptr);
        const Vector precond = trace(&sys.inverse);
        const double direct = relative_error(lu_solve(sys.matrix, b), sys.x_true);

        const std::size_t rows = std::max(unprec.size(), precond.size());
        for (std::size_t k = 0; k < rows; ++k)
            t.add_row({kappa, as_double(k), unprec[std::min(k, unprec.size() - 1)],
                       precond[std::min(k, precond.size() - 1)], direct});
    }
    return t;
}

Table run_interp(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"n",        "err_mono",      "err_mono_precond",      "err_cheb",
                 "cond_mono", "cond_cheb",    "cond_product",          "geo_err_mono",
                 "geo_err_mono_precond",      "geo_err_cheb"};
    for (const std::size_t n : geometric_sweep(std::max<std::size_t>(cfg.n_min, 2), cfg.n_max)) {
        const InterpAverages avg = interp_experiment_averaged(n, cfg.draws, cfg.seed);
        const NodeSet nodes = chebyshev_nodes(n);
        const DenseMatrix lm = interpolation_matrix(nodes, Basis::Monomial).matrix;
        const DenseMatrix lt = interpolation_matrix(nodes, Basis::Chebyshev).matrix;
        const DenseMatrix prod = lm * cheb_to_mono(n).transpose();
        t.add_row({as_double(n), avg.arithmetic.err_mono, avg.arithmetic.err_mono_precond,
                   avg.arithmetic.err_cheb, cond2(lm), cond2(lt), cond2(prod), avg.geometric.err_mono,
                   avg.geometric.err_mono_precond, avg.geometric.err_cheb});
    }
    return t;
}

namespace {

double coeff_distance(std::span<const double> c, std::span<const double> ref) {
    double d = 0.0;
    for (std::size_t i = 0; i < std::max(c.size(), ref.size()); ++i) {
        const double a = i < c.size() ? c[i] : 0.0;
        const double b = i < ref.size() ? ref[i] : 0.0;
        d += (a - b) * (a - b);
    }
    return std::sqrt(d);
}

}  // namespace

Table run_spectral(const ExperimentConfig& cfg) {
    const BVProblem p = example_spectral_problem();
    const std::size_t n_lo = std::max<std::size_t>(cfg.n_min, 2 * static_cast<std::size_t>(p.order) + 1);
    const std::vector<std::size_t> ns = geometric_sweep(n_lo, cfg.n_max);
    const CoeffVector ref = solve_bvp(p, 2 * cfg.n_max, SpectralMethod::UltraR);
    Table t;
    t.columns = {"n",      "cond_unprec", "cond_ultra",       "cond_ultraR",
                 "norm_A", "norm_Ainv",   "err_vs_reference", "err_unprec_vs_reference"};
    for (const std::size_t n : ns) {
        const double cu = cond2(assemble(p, n, SpectralMethod::Unprec).matrix);
        const double cv = cond2(assemble(p, n, SpectralMethod::Ultra).matrix);
        const Vector sv = singular_values(assemble(p, n, SpectralMethod::UltraR).matrix);
        const double err = coeff_distance(solve_bvp(p, n, SpectralMethod::UltraR).coeffs, ref.coeffs);
        const double err_u = coeff_distance(solve_bvp(p, n, SpectralMethod::Unprec).coeffs, ref.coeffs);
        t.add_row({as_double(n), cu, cv, sv.front() / sv.back(), sv.front(), 1.0 / sv.back(), err, err_u});
    }
    return t;
}

namespace {

Vector checked_solve(const LinearSystem& sys, const std::string& what) {
    if (!sys.matrix.all_finite()) throw SingularSystem(what + ": non-finite system matrix");
    try {
        return lu_solve(sys.matrix, sys.rhs);
    } catch (const SingularMatrix& e) {
        throw SingularSystem(what + ": " + e.what());
    }
}

}  // namespace

Table run_fem(const ExperimentConfig& cfg) {
    FourthOrderProblem p;
    if (cfg.problem == "biharmonic")
        p = biharmonic_problem();
    else if (cfg.problem == "L2")
        p = l2_problem(cfg.alpha);
    else
        throw ConfigError("fem: unknown problem '" + cfg.problem + "'");
    const QuadratureRule quad = default_fem_quadrature();
    Table t;
    t.columns = {"n",           "cond_unprec",  "cond_fop",         "relH2_unprec",
                 "relL2_unprec", "relL2_matrixprec", "relL2_fop",   "relH2_fop"};
    for (const std::size_t n : geometric_sweep(std::max<std::size_t>(cfg.n_min, 2), cfg.n_max)) {
        const UniformMesh mesh(n);
        const bool with_cond = n <= cfg.cond_n_max;
        double cond_unprec = kNaN, cond_fop = kNaN;
        ErrorNorms e_unprec, e_fop;
        {
            const LinearSystem sys = assemble_galerkin(p, mesh, quad);
            if (with_cond) cond_unprec = cond2(sys.matrix);
            const Vector x = checked_solve(sys, "fem");
            e_unprec = error_norms(hermite_combination(mesh, x), p.u, p.du, p.d2u, quad);
        }
        {
            const LinearSystem sys = assemble_fop(p, mesh, quad);
            if (with_cond) cond_fop = cond2(sys.matrix);
            const Vector v = checked_solve(sys, "fem fop");
            e_fop = error_norms(fourfold_integrate(hermite_combination(mesh, v)), p.u, p.du, p.d2u, quad);
        }
        const SolveReport base = matrix_precond_baseline(p, mesh);
        t.add_row({as_double(n), cond_unprec, cond_fop, e_unprec.rel_H2, e_unprec.rel_L2,
                   base.errors ? base.errors->rel_L2 : kNaN, e_fop.rel_L2, e_fop.rel_H2});
    }
    return t;
}

Table run_mass_cond(const ExperimentConfig& cfg) {
    Table t;
    t.columns = {"n", "cond_mass", "eig_min_scaled", "eig_max_scaled", "bound_cond", "delta"};
    for (const std::size_t n : geometric_sweep(std::max<std::size_t>(cfg.n_min, 2), cfg.n_max)) {
        const UniformMesh mesh(n);
        const Vector ev = symmetric_eigenvalues(scaled_mass_matrix(mesh));
        t.add_row({as_double(n), cond2(mass_matrix(mesh)), ev.front(), ev.back(), mass_cond_bound(),
                   mass_delta()});
    }
    return t;
}

Table run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == "gmres-demo") return run_gmres_demo(cfg);
    if (cfg.experiment == "interp") return run_interp(cfg);
    if (cfg.experiment == "spectral") return run_spectral(cfg);
    if (cfg.experiment == "fem") return run_fem(cfg);
    if (cfg.experiment == "mass-cond") return run_mass_cond(cfg);
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

std::string experiment_svg(const ExperimentConfig& cfg, const Table& t) {
    if (cfg.experiment == "gmres-demo") {
        // One curve per kappa would need a long-format split; plot the last kappa.
        Table last;
        last.columns = t.columns;
        const double k = t.rows.empty() ? 0.0 : t.rows.back()[0];
        for (const auto& r : t.rows)
            if (r[0] == k) last.rows.push_back(r);
        for (auto& r : last.rows) r[1] += 1.0;
        last.columns[1] = "iteration+1";
        return loglog_svg(last, "iteration+1", {"rel_error_unprec", "rel_error_precond", "rel_error_direct"},
                          "GMRES relative error, kappa = " + format_double(k));
    }
    if (cfg.experiment == "interp")
        return loglog_svg(t, "n", {"err_mono", "err_mono_precond", "err_cheb", "cond_mono", "cond_product"},
                          "interpolation");
    if (cfg.experiment == "spectral")
        return loglog_svg(t, "n", {"cond_unprec", "cond_ultra", "cond_ultraR", "norm_A", "norm_Ainv"},
                          "spectral conditioning");
    if (cfg.experiment == "fem")
        return loglog_svg(t, "n",
                          {"cond_unprec", "cond_fop", "relH2_unprec", "relL2_unprec", "relL2_matrixprec",
                           "relL2_fop"},
                          "fem " + cfg.problem);
    return loglog_svg(t, "n", {"cond_mass", "bound_cond"}, "mass matrix");
}

}  // namespace fop
