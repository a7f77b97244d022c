#pragma once

#include "fop/csv.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fop {

struct ExperimentConfig {
    std::string experiment;
    std::size_t n_min = 0;
    std::size_t n_max = 0;
    std::uint64_t seed = 1;
    std::string out;
    /// "biharmonic" or "L2" (fem only).
    std::string problem = "biharmonic";
    double alpha = 200.0;
    std::vector<double> kappas = {1.0, 1e4, 1e8, 1e12, 1e16};
    bool svg = false;
    /// Condition numbers are skipped (written as nan) above this n.
    std::size_t cond_n_max = 1024;
    std::size_t draws = 100;
    /// GMRES tolerance for the demo runs.
    double gmres_tol = 1e-15;
};

/// n_min, 2 n_min, 4 n_min, ... while <= n_max. Throws ConfigError on an
/// empty range.
std::vector<std::size_t> geometric_sweep(std::size_t n_min, std::size_t n_max);

/// Relative error per GMRES iteration for each kappa (n = n_max):
/// kappa, iteration, rel_error_unprec, rel_error_precond, rel_error_direct.
Table run_gmres_demo(const ExperimentConfig& cfg);

/// Averages over cfg.draws draws per n, plus condition numbers of L_mu,
/// L_T and the computed product L_mu C^T.
Table run_interp(const ExperimentConfig& cfg);

/// Conditioning and accuracy of the three spectral discretizations of the
/// example problem, against an UltraR reference at 2 n_max.
Table run_spectral(const ExperimentConfig& cfg);

/// Conditioning and errors of the unpreconditioned, matrix-preconditioned
/// and FOP finite element solves.
Table run_fem(const ExperimentConfig& cfg);

/// Mass-matrix condition number and the extreme eigenvalues of D M D.
Table run_mass_cond(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
Table run_experiment(const ExperimentConfig& cfg);

/// Log-log SVG for the experiment's --svg output.
std::string experiment_svg(const ExperimentConfig& cfg, const Table& t);

}  // namespace fop
