#include "fop/csv.hpp"
#include "fop/error.hpp"
#include "fop/experiments.hpp"
#include "fop/fem.hpp"
#include "fop/svg.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

using namespace fop;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fop_tests";
    fs::create_directories(dir);
    return dir / name;
}

#ifdef FOPBENCH_EXE
int run_cli(const std::string& args, const fs::path& err) {
    const std::string cmd = std::string("\"") + FOPBENCH_EXE + "\" " + args + " 2> \"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }
#endif

}  // namespace

TEST_CASE("csv formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    for (double v : {0.1, 1.0 / 3.0, 2.0 / 3.0 * 1e10, 6.02214076e23})
        CHECK(std::stod(format_double(v)) == v);

    Table t;
    t.columns = {"a", "b"};
    t.add_row({1.0, 0.5});
    t.add_row({2.0, 0.25});
    CHECK(to_csv(t) == "a,b\n1,0.5\n2,0.25\n");
    CHECK_THROWS_AS(t.add_row({1.0}), DimensionMismatch);
    CHECK(t.column("b")[1] == 0.25);
    CHECK_THROWS((void)t.column_index("c"));
    CHECK_THROWS_AS(write_csv(t, "/nonexistent-dir/x.csv"), IoError);
}

TEST_CASE("geometric sweep") {
    CHECK(geometric_sweep(4, 64) == std::vector<std::size_t>{4, 8, 16, 32, 64});
    CHECK(geometric_sweep(5, 5) == std::vector<std::size_t>{5});
    CHECK_THROWS_AS(geometric_sweep(8, 4), ConfigError);
    CHECK_THROWS_AS(geometric_sweep(0, 4), ConfigError);
}

TEST_CASE("gmres demo") {
    ExperimentConfig cfg;
    cfg.experiment = "gmres-demo";
    cfg.n_min = cfg.n_max = 40;
    cfg.kappas = {1.0, 1e12};
    const Table t = run_gmres_demo(cfg);
    REQUIRE(t.columns == std::vector<std::string>{"kappa", "iteration", "rel_error_unprec", "rel_error_precond",
                                                   "rel_error_direct"});
    bool seen_last = false;
    for (const auto& row : t.rows) {
        if (row[0] == 1.0 && row[1] >= 1.0) {
            CHECK(row[2] <= 1e-12);
            CHECK(row[3] <= 1e-12);
            CHECK(row[4] <= 1e-12);
        }
        if (row[0] == 1e12) seen_last = true;
    }
    REQUIRE(seen_last);
    const auto& last = t.rows.back();
    for (std::size_t c = 2; c < 5; ++c) {
        CHECK(last[c] >= 1e-6);
        CHECK(last[c] <= 1e-2);
    }
    cfg.kappas = {0.5};
    CHECK_THROWS_AS(run_gmres_demo(cfg), ConfigError);
}

TEST_CASE("experiment tables") {
    ExperimentConfig cfg;
    cfg.experiment = "mass-cond";
    cfg.n_min = 4;
    cfg.n_max = 16;
    Table t = run_experiment(cfg);
    CHECK(t.rows.size() == 3);
    CHECK(t.column("bound_cond")[0] == doctest::Approx(mass_cond_bound()));

    cfg.experiment = "interp";
    cfg.n_min = 4;
    cfg.n_max = 8;
    cfg.draws = 3;
    t = run_experiment(cfg);
    CHECK(t.rows.size() == 2);
    CHECK(t.column("cond_cheb")[1] == doctest::Approx(std::sqrt(2.0)));

    cfg.experiment = "spectral";
    cfg.n_min = 16;
    cfg.n_max = 32;
    t = run_experiment(cfg);
    CHECK(t.rows.size() == 2);
    CHECK(t.column_index("err_vs_reference") == 6);

    cfg.experiment = "fem";
    cfg.n_min = 4;
    cfg.n_max = 8;
    t = run_experiment(cfg);
    CHECK(t.rows.size() == 2);
    CHECK(t.column("relL2_fop")[1] < t.column("relL2_fop")[0]);
    CHECK(t.column("relL2_unprec")[1] < t.column("relL2_unprec")[0]);
    cfg.problem = "other";
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    cfg.experiment = "unknown";
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("determinism") {
    ExperimentConfig cfg;
    cfg.experiment = "interp";
    cfg.n_min = 8;
    cfg.n_max = 16;
    cfg.draws = 5;
    cfg.seed = 7;
    const std::string a = to_csv(run_experiment(cfg));
    const std::string b = to_csv(run_experiment(cfg));
    CHECK(a == b);
    cfg.seed = 8;
    CHECK(to_csv(run_experiment(cfg)) != a);
}

TEST_CASE("svg output") {
    Table t;
    t.columns = {"n", "y"};
    t.add_row({1.0, 10.0});
    t.add_row({10.0, 1000.0});
    const std::string svg = loglog_svg(t, "n", {"y"}, "title");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

#ifdef FOPBENCH_EXE
TEST_CASE("fopbench command line") {
    const fs::path out1 = scratch("demo1.csv");
    const fs::path out2 = scratch("demo2.csv");
    const fs::path err = scratch("stderr.txt");

    SUBCASE("success is byte-identical per seed") {
        const std::string args = "gmres-demo --n-max 30 --seed 5 --kappa 1,1e8 --out ";
        CHECK(run_cli(args + "\"" + out1.string() + "\" --svg", err) == 0);
        CHECK(run_cli(args + "\"" + out2.string() + "\"", err) == 0);
        CHECK(slurp(out1) == slurp(out2));
        CHECK(slurp(out1).rfind("kappa,iteration,", 0) == 0);
        CHECK(fs::exists(scratch("demo1.svg")));
        CHECK(slurp(err).empty());
    }
    SUBCASE("configuration errors exit 1") {
        for (const std::string& args :
             {std::string("bogus --out x.csv"), std::string("interp"), std::string("fem --problem L3 --out x.csv"),
              std::string("interp --n-min 8 --n-max 4 --out x.csv"), std::string("gmres-demo --kappa 0.5 --out x.csv"),
              std::string("mass-cond --n-max 8 --out /nonexistent-dir/x.csv")}) {
            CAPTURE(args);
            CHECK(run_cli(args, err) == 1);
            const std::string msg = slurp(err);
            CHECK(line_count(msg) == 1);
            CHECK(msg.find("configuration error") != std::string::npos);
        }
    }
    SUBCASE("numerical failure exits 2") {
        CHECK(run_cli("fem --problem L2 --alpha nan --n-min 4 --n-max 4 --out \"" + out1.string() + "\"", err) == 2);
        const std::string msg = slurp(err);
        CHECK(line_count(msg) == 1);
        CHECK(msg.find("numerical failure") != std::string::npos);
    }
}
#endif
