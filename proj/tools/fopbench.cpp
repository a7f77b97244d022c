#include "fop/error.hpp"
#include "fop/experiments.hpp"
#include "fop/svg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <exception>
#include <string>

namespace {

struct Defaults {
    std::size_t n_min;
    std::size_t n_max;
};

Defaults defaults_for(const std::string& experiment) {
    if (experiment == "gmres-demo") return {100, 100};
    if (experiment == "interp") return {4, 64};
    if (experiment == "spectral") return {64, 512};
    if (experiment == "fem") return {16, 1024};
    return {4, 1024};
}

std::string svg_path(const std::string& out) {
    const auto dot = out.rfind('.');
    const auto slash = out.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return out.substr(0, dot) + ".svg";
    return out + ".svg";
}

}  // namespace

int main(int argc, char** argv) {
    fop::ExperimentConfig cfg;
    std::size_t n_min = 0, n_max = 0;

    CLI::App app{"Operator preconditioning experiments"};
    app.add_option("experiment", cfg.experiment, "Experiment to run")
        ->required()
        ->check(CLI::IsMember({"gmres-demo", "interp", "spectral", "fem", "mass-cond"}));
    app.add_option("--n-min", n_min, "Smallest n of the sweep");
    app.add_option("--n-max", n_max, "Largest n of the sweep (gmres-demo: matrix size)");
    app.add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
    app.add_option("--out", cfg.out, "Output CSV path")->required();
    app.add_option("--problem", cfg.problem, "fem operator")
        ->check(CLI::IsMember({"biharmonic", "L2"}))
        ->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "Coefficient scale of the L2 operator")->capture_default_str();
    app.add_option("--kappa", cfg.kappas, "Condition numbers for gmres-demo")->delimiter(',');
    app.add_option("--draws", cfg.draws, "Draws per n for interp")->capture_default_str();
    app.add_option("--cond-n-max", cfg.cond_n_max, "Skip condition numbers above this n (fem)")
        ->capture_default_str();
    app.add_option("--gmres-tol", cfg.gmres_tol, "GMRES tolerance for gmres-demo")->capture_default_str();
    app.add_flag("--svg", cfg.svg, "Also write a log-log SVG next to the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "fopbench: configuration error: %s\n", e.what());
        return 1;
    }

    const Defaults d = defaults_for(cfg.experiment);
    cfg.n_min = n_min ? n_min : d.n_min;
    cfg.n_max = n_max ? n_max : std::max(d.n_max, cfg.n_min);

    try {
        const fop::Table t = fop::run_experiment(cfg);
        fop::write_csv(t, cfg.out);
        if (cfg.svg) fop::write_svg(fop::experiment_svg(cfg, t), svg_path(cfg.out));
    } catch (const fop::ConfigError& e) {
        std::fprintf(stderr, "fopbench: configuration error: %s\n", e.what());
        return 1;
    } catch (const fop::InvalidKappa& e) {
        std::fprintf(stderr, "fopbench: configuration error: %s\n", e.what());
        return 1;
    } catch (const fop::IoError& e) {
        std::fprintf(stderr, "fopbench: configuration error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fopbench: numerical failure: %s\n", e.what());
        return 2;
    }
    return 0;
}
