#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "herald/heralding.hpp"

namespace herald {

// ---------------------------------------------------------------------------
// CSV plumbing
// ---------------------------------------------------------------------------

/// Column-oriented CSV with '#'-prefixed comment rows. All numeric cells are
/// preformatted strings so repeated runs with the same arguments are
/// bit-identical.
struct CsvTable {
    std::vector<std::string> comments;           // before the header
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // each sized like columns
    std::vector<std::string> trailing_comments;  // e.g. fitted exponents

    void write(std::ostream& os) const;
    void save(const std::string& path) const;  // throws on unwritable path
};

/// Scientific notation with 15 significant digits ("%.14e").
std::string format_sci(double x);

/// Complex in the CLI's "a+bi" grammar (round-trips through parse_complex).
std::string format_complex(std::complex<double> z);

/// Parses "a+bi" with optional parts: "0", "-1.5", "i", "-i", "2i", "1-2i",
/// "1e-3+2.5e-4i". Throws std::invalid_argument on anything else.
std::complex<double> parse_complex(const std::string& text);

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// `points` log-spaced integers in [n_min, n_max], deduplicated after
/// rounding, sorted ascending. Requires n_min >= 1.
std::vector<long> log_spaced_n(long n_min, long n_max, int points);

std::vector<long> linear_spaced_n(long n_min, long n_max, int points);

std::vector<double> linear_spaced(double lo, double hi, int points);

// ---------------------------------------------------------------------------
// Sweeps and figure presets
// ---------------------------------------------------------------------------

enum class SweepMode {
    fixed_n_sweep_s0,      // one n, many s0 (delta0 fixed)
    fixed_params_sweep_n,  // one (s0, delta0), many n
    figure2,               // P_n vs n, s0 in {0.5, 1, 1.5}, delta0 = 0
    figure3,               // P_n vs s0 in [0, 2], n in {2, 5, 10, 20}
    figure4a,              // P_n vs n, delta0 = 1,          s0 in {0.5, 1, 1.5}
    figure4b,              // ... delta0 = i
    figure4c,              // ... delta0 = exp(i pi/4)
    asymptotics,           // exact vs closed asymptote over n
};

struct SweepSpec {
    SweepMode mode;
    std::vector<long> n_list;
    std::vector<double> s0_list;
    std::vector<std::complex<double>> delta0_list;
    std::string invocation;  // recorded verbatim in a comment row
    int jobs = 1;
};

/// Presets fill in the grid lists for the figure / asymptotics modes;
/// custom sweeps pass them through unchanged. Throws on inconsistent specs
/// (e.g. log spacing from n_min = 0, unphysical points).
SweepSpec resolve_spec(SweepSpec spec);

/// Evaluates the sweep (optimizing lambda at every point) and assembles the
/// table, including fitted-decay comment rows for the figure modes. Rows
/// are ordered by the input grids regardless of evaluation order.
CsvTable run_sweep(const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Oracle verification
// ---------------------------------------------------------------------------

struct OracleReport {
    double worst_abs_dev = 0.0;     // |P_n(analytic) - P_n(oracle)|
    double worst_infidelity = 0.0;  // 1 - fidelity of conditional states
    std::string worst_point;        // parameters achieving worst_abs_dev
    long points_checked = 0;
    bool pass = false;
};

/// Cross-checks the analytic probability and conditional state against the
/// Fock expansion on a (lambda_sq x s0 x delta0) grid with n <= n_max.
/// lambda^2 takes `lambda_points` uniform values in
/// (0.05, 0.9 / (1 + s0)); s0 in {0, 0.5, 1, 1.5, 2}; delta0 in
/// {0, 0.5, i, 0.3+0.2i, 1}. pass requires worst_abs_dev <= tol and
/// conditional fidelity >= 1 - kOracleInfidelityTol everywhere.
OracleReport run_oracle_grid(int lambda_points, int n_max, double tol,
                             int jobs = 1);

inline constexpr double kOracleInfidelityTol = 1e-10;

/// Per-n deviation table for one parameter point (columns: n, P_analytic,
/// P_oracle, abs_dev, infidelity).
CsvTable oracle_point_table(double lambda_sq, double s0,
                            std::complex<double> delta0, int n_max,
                            const std::string& invocation);

// ---------------------------------------------------------------------------
// Parallel map
// ---------------------------------------------------------------------------

/// Runs fn(i) for i in [0, count) on `jobs` threads over a static ordered
/// partition. Results must be written to preallocated slots, so output
/// order never depends on scheduling. jobs <= 1 runs inline.
void parallel_for(long count, int jobs, const std::function<void(long)>& fn);

}  // namespace herald
