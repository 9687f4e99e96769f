// Command-line surface for heralded-state optimization: single-point
// optimization, parameter sweeps, figure-style CSV exports, asymptotic
// comparisons, and the Fock-expansion self-check.

#include <algorithm>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "herald/fock_oracle.hpp"
#include "herald/heralding.hpp"
#include "herald/sweep.hpp"
#include "herald/version.hpp"
#include "json.hpp"

namespace {

using herald::SweepMode;
using herald::SweepSpec;

std::string join_invocation(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

nlohmann::json record_of(const herald::OptResult& r, int n, double s0,
                         std::complex<double> delta0) {
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& c : r.candidate_roots)
        roots.push_back({{"lambda_sq", c.lambda_sq},
                         {"feasible", c.feasible},
                         {"log_pn", c.log_pn}});
    return {{"n", n},
            {"s0", s0},
            {"delta0", {{"re", delta0.real()}, {"im", delta0.imag()}}},
            {"lambda_sq_opt", r.lambda_sq_opt},
            {"log_pn", r.log_pn},
            {"pn", r.pn()},
            {"method", herald::to_string(r.method)},
            {"feasibility_margin", r.feasibility_margin},
            {"multiple_local_maxima", r.multiple_local_maxima},
            {"candidate_roots", std::move(roots)},
            {"version", herald::kVersion}};
}

int cmd_optimize(int n, double s0, const std::string& delta0_text,
                 const std::string& out_path) {
    const std::complex<double> delta0 = herald::parse_complex(delta0_text);
    const herald::OptResult r = herald::optimize_auto(n, s0, delta0);

    std::printf("n                  = %d\n", n);
    std::printf("s0                 = %.17g\n", s0);
    std::printf("delta0             = %s\n", herald::format_complex(delta0).c_str());
    std::printf("lambda_sq_opt      = %s\n", herald::format_sci(r.lambda_sq_opt).c_str());
    std::printf("ln_Pn              = %s\n", herald::format_sci(r.log_pn).c_str());
    std::printf("Pn                 = %s\n", herald::format_sci(r.pn()).c_str());
    std::printf("method             = %s\n", herald::to_string(r.method).c_str());
    std::printf("feasibility_margin = %s\n",
                herald::format_sci(r.feasibility_margin).c_str());
    std::printf("candidate_roots    = %zu (%zu feasible)\n", r.candidate_roots.size(),
                static_cast<std::size_t>(std::count_if(
                    r.candidate_roots.begin(), r.candidate_roots.end(),
                    [](const auto& c) { return c.feasible; })));
    if (r.multiple_local_maxima)
        std::printf("note: more than one feasible local maximum; argmax reported\n");

    const nlohmann::json record = record_of(r, n, s0, delta0);
    if (!out_path.empty()) {
        std::ofstream ofs(out_path);
        if (!ofs) throw std::runtime_error("cannot open for writing: " + out_path);
        ofs << record.dump(2) << "\n";
    } else {
        std::cout << record.dump() << "\n";
    }
    return 0;
}

std::vector<long> build_n_list(long n_min, long n_max, int n_points, bool log_n) {
    return log_n ? herald::log_spaced_n(n_min, n_max, n_points)
                 : herald::linear_spaced_n(n_min, n_max, n_points);
}

void save_and_report(const herald::CsvTable& table, const std::string& out_path) {
    table.save(out_path);
    std::printf("wrote %s (%zu rows)\n", out_path.c_str(), table.rows.size());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximum heralding probabilities of photon-counting state preparation"};
    app.set_version_flag("--version", std::string(herald::kProgramName) + " " +
                                          herald::kVersion);
    app.require_subcommand(1);
    const std::string invocation = join_invocation(argc, argv);

    // ---- optimize ----
    auto* opt = app.add_subcommand("optimize",
                                   "maximize P_n over lambda for one (n, s0, delta0)");
    int opt_n = 1;
    double opt_s0 = 0.0;
    std::string opt_delta0 = "0", opt_out;
    opt->add_option("--n", opt_n, "heralded photon number")->required();
    opt->add_option("--s0", opt_s0, "control parameter s0 (>= 0)");
    opt->add_option("--delta0", opt_delta0, "control parameter delta0, e.g. 0.3+0.2i");
    opt->add_option("--out", opt_out, "write the JSON record here instead of stdout");

    // ---- sweep ----
    auto* swp = app.add_subcommand("sweep",
                                   "optimize over an n range (fixed s0, delta0) or an "
                                   "s0 list (fixed n)");
    long swp_n = 0, swp_n_min = 0, swp_n_max = 0;
    int swp_n_points = 25, swp_jobs = 1;
    bool swp_log_n = false;
    std::vector<double> swp_s0;
    std::string swp_delta0 = "0", swp_out;
    swp->add_option("--n", swp_n, "fixed n (sweeps over --s0 values)");
    swp->add_option("--n-min", swp_n_min, "first n of the range");
    swp->add_option("--n-max", swp_n_max, "last n of the range");
    swp->add_option("--n-points", swp_n_points, "points in the n range");
    swp->add_flag("--log-n", swp_log_n, "log-space the n range");
    swp->add_option("--s0", swp_s0, "s0 value(s); repeat or comma-separate to sweep")
        ->delimiter(',');
    swp->add_option("--delta0", swp_delta0, "delta0, e.g. 1+0.5i");
    swp->add_option("--out", swp_out, "output CSV path")->required();
    swp->add_option("--jobs", swp_jobs, "worker threads");

    // ---- figure ----
    auto* fig = app.add_subcommand("figure", "export a preset curve family as CSV");
    std::string fig_panel, fig_out;
    int fig_jobs = 1;
    fig->add_option("panel", fig_panel, "one of 2, 3, 4a, 4b, 4c")
        ->required()
        ->check(CLI::IsMember({"2", "3", "4a", "4b", "4c"}));
    fig->add_option("--out", fig_out, "output CSV path")->required();
    fig->add_option("--jobs", fig_jobs, "worker threads");

    // ---- asymptotics ----
    auto* asy = app.add_subcommand(
        "asymptotics", "compare exact optimized P_n with its closed asymptote");
    double asy_s0 = 1.0;
    std::string asy_delta0 = "0", asy_out;
    long asy_n_min = 10, asy_n_max = 10000;
    int asy_n_points = 20, asy_jobs = 1;
    bool asy_log_n = false;
    asy->add_option("--s0", asy_s0, "s0 (regimes: s0=1 or s0=0)");
    asy->add_option("--delta0", asy_delta0, "delta0 (|delta0|>0 needs s0=0)");
    asy->add_option("--n-min", asy_n_min, "first n");
    asy->add_option("--n-max", asy_n_max, "last n");
    asy->add_option("--n-points", asy_n_points, "points in the n range");
    asy->add_flag("--log-n", asy_log_n, "log-space the n range");
    asy->add_option("--out", asy_out, "output CSV path")->required();
    asy->add_option("--jobs", asy_jobs, "worker threads");

    // ---- oracle-check ----
    auto* orc = app.add_subcommand(
        "oracle-check", "verify analytic P_n against the truncated Fock expansion");
    double orc_tol = 1e-9, orc_lambda_sq = -1.0, orc_s0 = 0.0;
    int orc_grid = 5, orc_n = 8, orc_jobs = 1;
    std::string orc_delta0 = "0", orc_out;
    orc->add_option("--tol", orc_tol, "max allowed |P_n deviation|");
    orc->add_option("--grid", orc_grid, "lambda_sq samples per s0 in grid mode");
    orc->add_option("--n", orc_n, "check counts n = 0..N");
    orc->add_option("--lambda-sq", orc_lambda_sq,
                    "single-point mode: fix lambda_sq and print a per-n table");
    orc->add_option("--s0", orc_s0, "s0 for single-point mode");
    orc->add_option("--delta0", orc_delta0, "delta0 for single-point mode");
    orc->add_option("--out", orc_out, "save the single-point table as CSV");
    orc->add_option("--jobs", orc_jobs, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*opt) return cmd_optimize(opt_n, opt_s0, opt_delta0, opt_out);

        if (*swp) {
            SweepSpec spec;
            spec.invocation = invocation;
            spec.jobs = swp_jobs;
            spec.delta0_list = {herald::parse_complex(swp_delta0)};
            const bool have_fixed_n = swp->count("--n") > 0;
            const bool have_range = swp->count("--n-min") > 0 || swp->count("--n-max") > 0;
            if (have_fixed_n == have_range)
                throw CLI::ValidationError(
                    "sweep", "give exactly one of --n or --n-min/--n-max");
            if (have_fixed_n) {
                spec.mode = SweepMode::fixed_n_sweep_s0;
                spec.n_list = {swp_n};
                if (swp_s0.empty())
                    throw CLI::ValidationError("sweep", "--s0 values required");
                spec.s0_list = swp_s0;
            } else {
                spec.mode = SweepMode::fixed_params_sweep_n;
                spec.n_list = build_n_list(swp_n_min, swp_n_max, swp_n_points, swp_log_n);
                if (swp_s0.size() > 1)
                    throw CLI::ValidationError("sweep",
                                               "an n sweep takes a single --s0");
                spec.s0_list = {swp_s0.empty() ? 0.0 : swp_s0.front()};
            }
            save_and_report(herald::run_sweep(spec), swp_out);
            return 0;
        }

        if (*fig) {
            SweepSpec spec;
            spec.invocation = invocation;
            spec.jobs = fig_jobs;
            if (fig_panel == "2") spec.mode = SweepMode::figure2;
            else if (fig_panel == "3") spec.mode = SweepMode::figure3;
            else if (fig_panel == "4a") spec.mode = SweepMode::figure4a;
            else if (fig_panel == "4b") spec.mode = SweepMode::figure4b;
            else spec.mode = SweepMode::figure4c;
            save_and_report(herald::run_sweep(spec), fig_out);
            return 0;
        }

        if (*asy) {
            SweepSpec spec;
            spec.invocation = invocation;
            spec.jobs = asy_jobs;
            spec.mode = SweepMode::asymptotics;
            spec.s0_list = {asy_s0};
            spec.delta0_list = {herald::parse_complex(asy_delta0)};
            spec.n_list = build_n_list(asy_n_min, asy_n_max, asy_n_points, asy_log_n);
            save_and_report(herald::run_sweep(spec), asy_out);
            return 0;
        }

        if (*orc) {
            if (orc->count("--lambda-sq") > 0) {
                const herald::CsvTable table = herald::oracle_point_table(
                    orc_lambda_sq, orc_s0, herald::parse_complex(orc_delta0), orc_n,
                    invocation);
                if (!orc_out.empty()) save_and_report(table, orc_out);
                else table.write(std::cout);
                for (const auto& row : table.rows)
                    if (std::stod(row[3]) > orc_tol) {
                        std::fprintf(stderr, "deviation above %g at n=%s\n", orc_tol,
                                     row[0].c_str());
                        return 1;
                    }
                return 0;
            }
            const herald::OracleReport report =
                herald::run_oracle_grid(orc_grid, orc_n, orc_tol, orc_jobs);
            std::printf("points checked    = %ld\n", report.points_checked);
            std::printf("worst |deviation| = %s at %s\n",
                        herald::format_sci(report.worst_abs_dev).c_str(),
                        report.worst_point.c_str());
            std::printf("worst infidelity  = %s\n",
                        herald::format_sci(report.worst_infidelity).c_str());
            std::printf("%s (tol %g)\n", report.pass ? "PASS" : "FAIL", orc_tol);
            return report.pass ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
