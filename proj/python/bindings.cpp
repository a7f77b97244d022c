#include "fop/csv.hpp"
#include "fop/error.hpp"
#include "fop/experiments.hpp"
#include "fop/fem.hpp"
#include "fop/interp.hpp"
#include "fop/linalg.hpp"
#include "fop/orthopoly.hpp"
#include "fop/spectral.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

namespace py = pybind11;
using namespace fop;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_numpy(const DenseMatrix& a) {
    Array out({a.rows(), a.cols()});
    std::copy(a.entries().begin(), a.entries().end(), out.mutable_data());
    return out;
}

Array to_numpy(const Vector& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

DenseMatrix from_numpy(const Array& a) {
    if (a.ndim() != 2) throw DimensionMismatch("expected a 2-d array");
    const auto r = static_cast<std::size_t>(a.shape(0));
    const auto c = static_cast<std::size_t>(a.shape(1));
    return DenseMatrix(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

Vector vector_from_numpy(const Array& a) {
    if (a.ndim() != 1) throw DimensionMismatch("expected a 1-d array");
    return Vector(a.data(), a.data() + a.shape(0));
}

SpectralMethod method_from(const std::string& name) {
    if (name == "unprec") return SpectralMethod::Unprec;
    if (name == "ultra") return SpectralMethod::Ultra;
    if (name == "ultraR") return SpectralMethod::UltraR;
    throw ConfigError("unknown spectral method '" + name + "'");
}

FourthOrderProblem fem_problem(const std::string& name, double alpha) {
    if (name == "biharmonic") return biharmonic_problem();
    if (name == "L2") return l2_problem(alpha);
    throw ConfigError("unknown fem problem '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Full operator preconditioning: interpolation, ultraspherical spectral and Hermite FEM";

    // Translators run newest first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SingularSystem>(m, "SingularSystem", PyExc_ArithmeticError);
    py::register_exception<SingularMatrix>(m, "SingularMatrix", PyExc_ArithmeticError);

    m.def("cond2", [](const Array& a) { return cond2(from_numpy(a)); }, py::arg("a"));
    m.def(
        "prescribed_cond_matrix",
        [](std::size_t n, double kappa, std::uint64_t seed) {
            const PrescribedSystem s = prescribed_cond_matrix(n, kappa, seed);
            return py::make_tuple(to_numpy(s.matrix), to_numpy(s.x_true));
        },
        py::arg("n"), py::arg("kappa"), py::arg("seed") = 1);
    m.def(
        "gmres",
        [](const Array& a, const Array& b, double tol, std::size_t max_iters) {
            const GmresReport r =
                gmres(LinearMap::from_matrix(from_numpy(a)), vector_from_numpy(b), nullptr, tol, max_iters);
            py::dict out;
            out["solution"] = to_numpy(r.solution);
            out["residual_history"] = to_numpy(r.residual_history);
            out["iterations"] = r.iterations;
            out["converged"] = r.converged;
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("tol") = 1e-12, py::arg("max_iters") = 100);

    m.def("chebyshev_nodes", [](std::size_t n) { return to_numpy(chebyshev_nodes(n).points); }, py::arg("n"));
    m.def(
        "interpolation_matrix",
        [](const Array& nodes, const std::string& basis) {
            Basis b = Basis::Chebyshev;
            if (basis == "monomial")
                b = Basis::Monomial;
            else if (basis != "chebyshev")
                throw ConfigError("basis must be 'monomial' or 'chebyshev'");
            return to_numpy(interpolation_matrix(NodeSet{vector_from_numpy(nodes)}, b).matrix);
        },
        py::arg("nodes"), py::arg("basis") = "chebyshev");
    m.def(
        "interp_experiment",
        [](std::size_t n, std::uint64_t seed) {
            const InterpErrors e = interp_experiment(n, seed);
            return py::dict(py::arg("err_mono") = e.err_mono, py::arg("err_mono_precond") = e.err_mono_precond,
                            py::arg("err_cheb") = e.err_cheb);
        },
        py::arg("n"), py::arg("seed") = 1);

    m.def(
        "gauss_legendre",
        [](std::size_t m) {
            const QuadratureRule q = gauss_legendre(m);
            return py::make_tuple(to_numpy(q.nodes), to_numpy(q.weights));
        },
        py::arg("m"));
    m.def(
        "cheb_transform", [](const RealFunction& f, std::size_t n) { return to_numpy(cheb_transform(f, n).coeffs); },
        py::arg("f"), py::arg("n"));

    m.def(
        "solve_bvp",
        [](int order, std::vector<RealFunction> coeffs, RealFunction rhs,
           const std::vector<std::tuple<double, int, double>>& bcs, std::size_t n, const std::string& method) {
            BVProblem p;
            p.order = order;
            coeffs.resize(static_cast<std::size_t>(order));
            p.coeffs = std::move(coeffs);
            p.rhs = std::move(rhs);
            for (const auto& [point, deriv, value] : bcs) p.bcs.push_back({point, deriv, value});
            py::gil_scoped_release release;
            return solve_bvp(p, n, method_from(method)).coeffs;
        },
        py::arg("order"), py::arg("coeffs"), py::arg("rhs"), py::arg("bcs"), py::arg("n"),
        py::arg("method") = "ultraR",
        "Chebyshev coefficients of the solution of u^(N) + sum a_j u^(j) = f. "
        "coeffs lists a_0..a_{N-1} (None for zero); bcs holds (point, derivative, value).");
    m.def(
        "spectral_matrix",
        [](std::size_t n, const std::string& method) {
            return to_numpy(assemble(example_spectral_problem(), n, method_from(method)).matrix);
        },
        py::arg("n"), py::arg("method") = "ultra", "Bordered system of u'' + 10u' + 100xu = 1, u(+-1) = 0.");

    m.def("mass_matrix", [](std::size_t n) { return to_numpy(mass_matrix(UniformMesh(n))); }, py::arg("n"));
    m.def("mass_cond_bound", &mass_cond_bound);
    m.def(
        "fem_matrix",
        [](std::size_t n, const std::string& problem, bool fop, double alpha) {
            const FourthOrderProblem p = fem_problem(problem, alpha);
            const UniformMesh mesh(n);
            const QuadratureRule q = default_fem_quadrature();
            return to_numpy((fop ? assemble_fop(p, mesh, q) : assemble_galerkin(p, mesh, q)).matrix);
        },
        py::arg("n"), py::arg("problem") = "biharmonic", py::arg("fop") = false, py::arg("alpha") = 200.0);
    m.def(
        "fem_errors",
        [](std::size_t n, const std::string& problem, bool fop, double alpha) {
            const FourthOrderProblem p = fem_problem(problem, alpha);
            const UniformMesh mesh(n);
            const QuadratureRule q = default_fem_quadrature();
            const PiecewisePolynomial uh = fop ? solve_fop(p, mesh, q) : solve_unpreconditioned(p, mesh, q);
            const ErrorNorms e = error_norms(uh, p.u, p.du, p.d2u, q);
            return py::dict(py::arg("rel_H2") = e.rel_H2, py::arg("rel_L2") = e.rel_L2);
        },
        py::arg("n"), py::arg("problem") = "biharmonic", py::arg("fop") = false, py::arg("alpha") = 200.0);

    m.def(
        "run_experiment",
        [](const std::string& experiment, std::size_t n_min, std::size_t n_max, std::uint64_t seed,
           const std::string& problem, double alpha, std::vector<double> kappas, std::size_t draws) {
            ExperimentConfig cfg;
            cfg.experiment = experiment;
            cfg.n_min = n_min;
            cfg.n_max = n_max;
            cfg.seed = seed;
            cfg.problem = problem;
            cfg.alpha = alpha;
            if (!kappas.empty()) cfg.kappas = std::move(kappas);
            cfg.draws = draws;
            py::gil_scoped_release release;
            return to_csv(run_experiment(cfg));
        },
        py::arg("experiment"), py::arg("n_min"), py::arg("n_max"), py::arg("seed") = 1,
        py::arg("problem") = "biharmonic", py::arg("alpha") = 200.0, py::arg("kappas") = std::vector<double>{},
        py::arg("draws") = 100, "Runs one experiment and returns its CSV text.");
}
