#include "herald/sweep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "herald/fock_oracle.hpp"
#include "herald/version.hpp"

namespace herald {

// ---------------------------------------------------------------------------
// CSV plumbing
// ---------------------------------------------------------------------------

void CsvTable::write(std::ostream& os) const {
    for (const auto& c : comments) os << "# " << c << "\n";
    for (std::size_t k = 0; k < columns.size(); ++k)
        os << columns[k] << (k + 1 < columns.size() ? "," : "");
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k)
            os << row[k] << (k + 1 < row.size() ? "," : "");
        os << "\n";
    }
    for (const auto& c : trailing_comments) os << "# " << c << "\n";
}

void CsvTable::save(const std::string& path) const {
    std::ofstream ofs(path);
    if (!ofs) throw std::runtime_error("cannot open for writing: " + path);
    write(ofs);
    ofs.flush();
    if (!ofs) throw std::runtime_error("write failed: " + path);
}

std::string format_sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.14e", x);
    return buf;
}

namespace {

std::string format_plain(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// short label for column names ("0.5", "2")
std::string format_label(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

double parse_double_all(const std::string& s, const std::string& whole) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad complex literal: \"" + whole + "\"");
    }
    if (pos != s.size())
        throw std::invalid_argument("bad complex literal: \"" + whole + "\"");
    return v;
}

}  // namespace

std::string format_complex(std::complex<double> z) {
    const double im = z.imag();
    return format_plain(z.real()) + (im < 0.0 ? "-" : "+") + format_plain(std::abs(im)) +
           "i";
}

std::complex<double> parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty complex literal");

    if (s.back() != 'i') return {parse_double_all(s, text), 0.0};

    std::string body = s.substr(0, s.size() - 1);
    if (body.empty() || body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};

    std::size_t split = std::string::npos;
    for (std::size_t k = body.size() - 1; k >= 1; --k) {
        const char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, parse_double_all(body, text)};

    const std::string real_part = body.substr(0, split);
    std::string imag_part = body.substr(split);
    double imag;
    if (imag_part == "+")
        imag = 1.0;
    else if (imag_part == "-")
        imag = -1.0;
    else
        imag = parse_double_all(imag_part, text);
    return {parse_double_all(real_part, text), imag};
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

namespace {

void check_range(long n_min, long n_max, int points) {
    if (n_min < 1) throw std::invalid_argument("count grids start at n >= 1");
    if (n_max < n_min) throw std::invalid_argument("empty count range");
    if (points < 1) throw std::invalid_argument("need at least one grid point");
}

std::vector<long> dedupe_sorted(std::vector<long> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::vector<long> log_spaced_n(long n_min, long n_max, int points) {
    check_range(n_min, n_max, points);
    std::vector<long> out;
    const double lo = std::log(static_cast<double>(n_min));
    const double hi = std::log(static_cast<double>(n_max));
    for (int k = 0; k < points; ++k) {
        const double f = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
        long n = std::lround(std::exp(lo + f * (hi - lo)));
        out.push_back(std::clamp(n, n_min, n_max));
    }
    return dedupe_sorted(std::move(out));
}

std::vector<long> linear_spaced_n(long n_min, long n_max, int points) {
    check_range(n_min, n_max, points);
    std::vector<long> out;
    for (int k = 0; k < points; ++k) {
        const double f = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
        out.push_back(std::clamp(
            std::lround(n_min + f * static_cast<double>(n_max - n_min)), n_min, n_max));
    }
    return dedupe_sorted(std::move(out));
}

std::vector<double> linear_spaced(double lo, double hi, int points) {
    if (points < 1) throw std::invalid_argument("need at least one grid point");
    if (points == 1) return {lo};
    std::vector<double> out(points);
    for (int k = 0; k < points; ++k) out[k] = lo + (hi - lo) * k / (points - 1);
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

struct AsymChoice {
    AsymptoticRegime regime;
    double param;
    const char* name;
};

AsymChoice asym_choice(double s0, std::complex<double> delta0) {
    if (delta0 == std::complex<double>(0.0) && s0 == 1.0)
        return {AsymptoticRegime::parity_s1, 0.0, "parity_s1"};
    if (delta0 == std::complex<double>(0.0) && s0 == 0.0)
        return {AsymptoticRegime::fock_s0, 0.0, "fock_s0"};
    if (s0 == 0.0 && std::abs(delta0) > 0.0)
        return {AsymptoticRegime::added, std::abs(delta0), "added"};
    throw std::invalid_argument(
        "no closed asymptote for s0=" + format_label(s0) + ", delta0=" +
        format_complex(delta0) +
        "; supported: (s0=1, delta0=0), (s0=0, delta0=0), (s0=0, |delta0|>0)");
}

std::vector<long> default_figure_n() {
    std::vector<long> n;
    for (long k = 1; k <= 20; ++k) n.push_back(k);
    for (long k : log_spaced_n(20, 2000, 25)) n.push_back(k);
    return dedupe_sorted(std::move(n));
}

bool is_figure_n_mode(SweepMode m) {
    return m == SweepMode::figure2 || m == SweepMode::figure4a ||
           m == SweepMode::figure4b || m == SweepMode::figure4c;
}

std::complex<double> figure_delta0(SweepMode m) {
    switch (m) {
        case SweepMode::figure4a: return {1.0, 0.0};
        case SweepMode::figure4b: return {0.0, 1.0};
        case SweepMode::figure4c:
            return {std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4)};
        default: return {0.0, 0.0};
    }
}

void base_comments(CsvTable& table, const SweepSpec& spec) {
    table.comments.push_back("invocation: " + (spec.invocation.empty()
                                                   ? std::string("(library call)")
                                                   : spec.invocation));
    table.comments.push_back(std::string("version: ") + kProgramName + " " + kVersion);
}

int as_int_n(long n) {
    if (n < 0 || n > 2'000'000'000L) throw std::invalid_argument("count out of range");
    return static_cast<int>(n);
}

}  // namespace

SweepSpec resolve_spec(SweepSpec spec) {
    switch (spec.mode) {
        case SweepMode::figure2:
        case SweepMode::figure4a:
        case SweepMode::figure4b:
        case SweepMode::figure4c:
            spec.s0_list = {0.5, 1.0, 1.5};
            spec.delta0_list = {figure_delta0(spec.mode)};
            spec.n_list = default_figure_n();
            break;
        case SweepMode::figure3:
            spec.s0_list = linear_spaced(0.0, 2.0, 81);
            spec.delta0_list = {{0.0, 0.0}};
            spec.n_list = {2, 5, 10, 20};
            break;
        case SweepMode::fixed_n_sweep_s0:
            if (spec.n_list.size() != 1)
                throw std::invalid_argument("s0 sweep takes exactly one n");
            if (spec.delta0_list.size() != 1)
                throw std::invalid_argument("s0 sweep takes exactly one delta0");
            if (spec.s0_list.empty())
                throw std::invalid_argument("s0 sweep needs s0 values");
            break;
        case SweepMode::fixed_params_sweep_n:
            if (spec.s0_list.size() != 1 || spec.delta0_list.size() != 1)
                throw std::invalid_argument("n sweep takes exactly one (s0, delta0)");
            if (spec.n_list.empty()) throw std::invalid_argument("n sweep needs n values");
            break;
        case SweepMode::asymptotics:
            if (spec.s0_list.size() != 1 || spec.delta0_list.size() != 1)
                throw std::invalid_argument("asymptotics takes exactly one (s0, delta0)");
            if (spec.n_list.empty())
                throw std::invalid_argument("asymptotics needs n values");
            asym_choice(spec.s0_list[0], spec.delta0_list[0]);  // validates
            break;
    }
    for (long n : spec.n_list)
        if (n < 1) throw std::invalid_argument("sweeps need n >= 1");
    for (double s0 : spec.s0_list)
        if (!(s0 >= 0.0)) throw std::invalid_argument("sweeps need s0 >= 0");
    if (spec.jobs < 1) spec.jobs = 1;
    return spec;
}

namespace {

CsvTable sweep_figure_n(const SweepSpec& spec) {
    const std::complex<double> delta0 = spec.delta0_list.at(0);
    const long curves = static_cast<long>(spec.s0_list.size());
    const long n_count = static_cast<long>(spec.n_list.size());

    std::vector<OptResult> results(curves * n_count);
    parallel_for(curves * n_count, spec.jobs, [&](long idx) {
        const long ci = idx / n_count, ni = idx % n_count;
        results[idx] =
            optimize_auto(as_int_n(spec.n_list[ni]), spec.s0_list[ci], delta0);
    });

    CsvTable table;
    base_comments(table, spec);
    table.comments.push_back("delta0 = " + format_complex(delta0));
    table.columns = {"n"};
    for (double s0 : spec.s0_list) {
        table.columns.push_back("Pn_s0_" + format_label(s0));
        table.columns.push_back("lnPn_s0_" + format_label(s0));
    }
    for (long ni = 0; ni < n_count; ++ni) {
        std::vector<std::string> row{std::to_string(spec.n_list[ni])};
        for (long ci = 0; ci < curves; ++ci) {
            const OptResult& r = results[ci * n_count + ni];
            row.push_back(format_sci(r.pn()));
            row.push_back(format_sci(r.log_pn));
        }
        table.rows.push_back(std::move(row));
    }

    // decay exponent per curve, fitted over the grid's upper decade
    const long n_max = spec.n_list.back();
    for (long ci = 0; ci < curves; ++ci) {
        std::vector<std::pair<long, double>> pts;
        for (long ni = 0; ni < n_count; ++ni)
            if (spec.n_list[ni] * 10 >= n_max)
                pts.emplace_back(spec.n_list[ni], results[ci * n_count + ni].log_pn);
        if (pts.size() < 5) continue;
        const ScalingFit fit = fit_gamma(pts);
        std::ostringstream line;
        line << "fit s0=" << format_label(spec.s0_list[ci]) << " over n in ["
             << fit.n_min << ", " << fit.n_max << "]: Pn ~ " << format_sci(fit.prefactor)
             << " * n^-" << format_sci(fit.gamma)
             << " (rms residual " << format_sci(fit.residual) << " in ln Pn)";
        table.trailing_comments.push_back(line.str());
    }
    return table;
}

CsvTable sweep_figure3(const SweepSpec& spec) {
    const long curves = static_cast<long>(spec.n_list.size());
    const long s_count = static_cast<long>(spec.s0_list.size());

    std::vector<OptResult> results(curves * s_count);
    parallel_for(curves * s_count, spec.jobs, [&](long idx) {
        const long ci = idx / s_count, si = idx % s_count;
        results[idx] =
            optimize_auto(as_int_n(spec.n_list[ci]), spec.s0_list[si], {0.0, 0.0});
    });

    CsvTable table;
    base_comments(table, spec);
    table.comments.push_back(
        "n values {2, 5, 10, 20} are representative picks; delta0 = 0");
    table.columns = {"s0"};
    for (long n : spec.n_list) {
        table.columns.push_back("Pn_n_" + std::to_string(n));
        table.columns.push_back("lnPn_n_" + std::to_string(n));
    }
    for (long si = 0; si < s_count; ++si) {
        std::vector<std::string> row{format_sci(spec.s0_list[si])};
        for (long ci = 0; ci < curves; ++ci) {
            const OptResult& r = results[ci * s_count + si];
            row.push_back(format_sci(r.pn()));
            row.push_back(format_sci(r.log_pn));
        }
        table.rows.push_back(std::move(row));
    }
    for (long ci = 0; ci < curves; ++ci) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (long si = 0; si < s_count; ++si) {
            lo = std::min(lo, results[ci * s_count + si].log_pn);
            hi = std::max(hi, results[ci * s_count + si].log_pn);
        }
        std::ostringstream line;
        line << "spread n=" << spec.n_list[ci]
             << ": max/min Pn = " << format_sci(std::exp(hi - lo));
        table.trailing_comments.push_back(line.str());
    }
    return table;
}

CsvTable sweep_points(const SweepSpec& spec) {
    const bool over_n = spec.mode == SweepMode::fixed_params_sweep_n;
    const long count =
        static_cast<long>(over_n ? spec.n_list.size() : spec.s0_list.size());
    const std::complex<double> delta0 = spec.delta0_list.at(0);

    std::vector<OptResult> results(count);
    parallel_for(count, spec.jobs, [&](long idx) {
        const long n = over_n ? spec.n_list[idx] : spec.n_list.at(0);
        const double s0 = over_n ? spec.s0_list.at(0) : spec.s0_list[idx];
        results[idx] = optimize_auto(as_int_n(n), s0, delta0);
    });

    CsvTable table;
    base_comments(table, spec);
    if (over_n)
        table.comments.push_back("s0 = " + format_label(spec.s0_list.at(0)) +
                                 ", delta0 = " + format_complex(delta0));
    else
        table.comments.push_back("n = " + std::to_string(spec.n_list.at(0)) +
                                 ", delta0 = " + format_complex(delta0));
    table.columns = {over_n ? "n" : "s0", "lambda_sq_opt", "lnPn", "Pn",
                     "method", "feasibility_margin"};
    for (long idx = 0; idx < count; ++idx) {
        const OptResult& r = results[idx];
        std::vector<std::string> row;
        row.push_back(over_n ? std::to_string(spec.n_list[idx])
                             : format_sci(spec.s0_list[idx]));
        row.push_back(format_sci(r.lambda_sq_opt));
        row.push_back(format_sci(r.log_pn));
        row.push_back(format_sci(r.pn()));
        row.push_back(to_string(r.method));
        row.push_back(format_sci(r.feasibility_margin));
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable sweep_asymptotics(const SweepSpec& spec) {
    const double s0 = spec.s0_list.at(0);
    const std::complex<double> delta0 = spec.delta0_list.at(0);
    const AsymChoice choice = asym_choice(s0, delta0);
    const long count = static_cast<long>(spec.n_list.size());

    std::vector<double> exact(count);
    parallel_for(count, spec.jobs, [&](long idx) {
        exact[idx] = optimize_auto(as_int_n(spec.n_list[idx]), s0, delta0).log_pn;
    });

    CsvTable table;
    base_comments(table, spec);
    table.comments.push_back(std::string("regime: ") + choice.name +
                             " (s0 = " + format_label(s0) +
                             ", delta0 = " + format_complex(delta0) + ")");
    table.columns = {"n",        "lnPn_exact",    "lnPn_asymptote",
                     "Pn_exact", "Pn_asymptote", "exact_over_asymptote"};
    for (long idx = 0; idx < count; ++idx) {
        const double asym =
            asymptotic_pn(choice.regime, spec.n_list[idx], choice.param).log();
        table.rows.push_back({std::to_string(spec.n_list[idx]), format_sci(exact[idx]),
                              format_sci(asym),
                              format_sci(LogProb::from_log(exact[idx]).linear()),
                              format_sci(LogProb::from_log(asym).linear()),
                              format_sci(std::exp(exact[idx] - asym))});
    }
    return table;
}

}  // namespace

CsvTable run_sweep(const SweepSpec& raw) {
    const SweepSpec spec = resolve_spec(raw);
    switch (spec.mode) {
        case SweepMode::figure3: return sweep_figure3(spec);
        case SweepMode::fixed_n_sweep_s0:
        case SweepMode::fixed_params_sweep_n: return sweep_points(spec);
        case SweepMode::asymptotics: return sweep_asymptotics(spec);
        default: return sweep_figure_n(spec);
    }
}

// ---------------------------------------------------------------------------
// Oracle verification
// ---------------------------------------------------------------------------

namespace {

struct GridPoint {
    double lambda_sq;
    double s0;
    std::complex<double> delta0;
};

std::vector<GridPoint> oracle_grid(int lambda_points) {
    if (lambda_points < 1) throw std::invalid_argument("grid needs lambda points");
    const std::vector<double> s0s = {0.0, 0.5, 1.0, 1.5, 2.0};
    const std::vector<std::complex<double>> deltas = {
        {0.0, 0.0}, {0.5, 0.0}, {0.0, 1.0}, {0.3, 0.2}, {1.0, 0.0}};
    std::vector<GridPoint> points;
    for (double s0 : s0s) {
        const double lo = 0.05, hi = 0.9 / (1.0 + s0);
        for (int k = 1; k <= lambda_points; ++k) {
            const double x = lo + k * (hi - lo) / (lambda_points + 1);
            for (const auto& d : deltas) points.push_back({x, s0, d});
        }
    }
    return points;
}

std::string describe(const GridPoint& g, int n) {
    std::ostringstream os;
    os << "lambda_sq=" << format_plain(g.lambda_sq) << " s0=" << format_label(g.s0)
       << " delta0=" << format_complex(g.delta0) << " n=" << n;
    return os.str();
}

struct PointWorst {
    double dev = 0.0;
    int dev_n = 0;
    double infid = 0.0;
};

PointWorst check_point(const GridPoint& g, int n_max) {
    const CoreParams p(std::sqrt(g.lambda_sq), g.s0, g.delta0);
    const TwoModeFock fock = expand_core_certified(p, n_max);
    PointWorst worst;
    for (int n = 0; n <= n_max; ++n) {
        const Conditioned cond = condition_on(fock, n);
        const double dev =
            std::abs(cond.probability.linear() - log_pn(p, n).linear());
        if (dev > worst.dev) {
            worst.dev = dev;
            worst.dev_n = n;
        }
        const PsiState psi = psi_coefficients(n, g.s0, g.delta0);
        worst.infid =
            std::max(worst.infid, 1.0 - fock_fidelity(cond.state, psi.coeffs));
    }
    return worst;
}

}  // namespace

OracleReport run_oracle_grid(int lambda_points, int n_max, double tol, int jobs) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    const std::vector<GridPoint> points = oracle_grid(lambda_points);
    std::vector<PointWorst> worst(points.size());
    parallel_for(static_cast<long>(points.size()), jobs,
                 [&](long idx) { worst[idx] = check_point(points[idx], n_max); });

    OracleReport report;
    report.points_checked = static_cast<long>(points.size()) * (n_max + 1);
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (worst[k].dev > report.worst_abs_dev) {
            report.worst_abs_dev = worst[k].dev;
            report.worst_point = describe(points[k], worst[k].dev_n);
        }
        report.worst_infidelity = std::max(report.worst_infidelity, worst[k].infid);
    }
    report.pass =
        report.worst_abs_dev <= tol && report.worst_infidelity <= kOracleInfidelityTol;
    return report;
}

CsvTable oracle_point_table(double lambda_sq, double s0, std::complex<double> delta0,
                            int n_max, const std::string& invocation) {
    const CoreParams p(std::sqrt(lambda_sq), s0, delta0);
    const TwoModeFock fock = expand_core_certified(p, n_max);

    CsvTable table;
    table.comments.push_back("invocation: " +
                             (invocation.empty() ? std::string("(library call)")
                                                 : invocation));
    table.comments.push_back(std::string("version: ") + kProgramName + " " + kVersion);
    table.comments.push_back("lambda_sq = " + format_plain(lambda_sq) +
                             ", s0 = " + format_label(s0) +
                             ", delta0 = " + format_complex(delta0));
    table.comments.push_back("expansion cutoff " + std::to_string(fock.n_c()) +
                             ", tail bound " + format_sci(fock.tail_bound));
    table.columns = {"n", "Pn_analytic", "Pn_oracle", "abs_dev", "infidelity"};
    for (int n = 0; n <= n_max; ++n) {
        const Conditioned cond = condition_on(fock, n);
        const double analytic = log_pn(p, n).linear();
        const double oracle = cond.probability.linear();
        const double infid =
            1.0 - fock_fidelity(cond.state, psi_coefficients(n, s0, delta0).coeffs);
        table.rows.push_back({std::to_string(n), format_sci(analytic),
                              format_sci(oracle), format_sci(std::abs(analytic - oracle)),
                              format_sci(infid)});
    }
    return table;
}

// ---------------------------------------------------------------------------
// Parallel map
// ---------------------------------------------------------------------------

void parallel_for(long count, int jobs, const std::function<void(long)>& fn) {
    if (count <= 0) return;
    const long workers = std::clamp<long>(jobs, 1, count);
    if (workers == 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    threads.reserve(workers);
    for (long j = 0; j < workers; ++j) {
        threads.emplace_back([&, j] {
            const long lo = count * j / workers, hi = count * (j + 1) / workers;
            try {
                for (long i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace herald
