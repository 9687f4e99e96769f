#include "herald/fock_oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace herald {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kCoreCutoffCap = 4096;
constexpr int kGeneralCutoffCap = 2048;

// exp() underflows to exactly 0 below roughly -745; such amplitudes carry
// no representable mass
constexpr double kAmpFloor = -745.0;

std::vector<double> log_factorial_table(int n_max) {
    std::vector<double> lf(n_max + 1);
    for (int k = 0; k <= n_max; ++k) lf[k] = log_factorial(k);
    return lf;
}

// k * log_v with the convention 0 * (-inf) = 0 (x^0 = 1 even for x = 0)
double pow_log(int k, double log_v) { return k == 0 ? 0.0 : k * log_v; }

// Sum of terms exp(logmag) e^{i phase} without leaving the log domain until
// the relative scale is known.
class LogComplexSum {
  public:
    void add(double logmag, double phase) {
        if (logmag == kNegInf) return;
        logmags_.push_back(logmag);
        phases_.push_back(phase);
    }

    // (log magnitude, phase) of the total
    std::pair<double, double> total() const {
        if (logmags_.empty()) return {kNegInf, 0.0};
        double peak = kNegInf;
        for (double lm : logmags_) peak = std::max(peak, lm);
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < logmags_.size(); ++k)
            acc += std::exp(logmags_[k] - peak) *
                   std::complex<double>(std::cos(phases_[k]), std::sin(phases_[k]));
        const double mag = std::abs(acc);
        if (mag == 0.0) return {kNegInf, 0.0};
        return {peak + std::log(mag), std::arg(acc)};
    }

  private:
    std::vector<double> logmags_;
    std::vector<double> phases_;
};

std::complex<double> from_log_polar(double logmag, double phase) {
    if (logmag < kAmpFloor) return 0.0;
    return std::exp(logmag) * std::complex<double>(std::cos(phase), std::sin(phase));
}

// per-mode series exp(a x^2 + b x) = sum_p coeff_p x^p, coefficients as
// (log magnitude, phase) pairs
void single_mode_series(std::complex<double> a, std::complex<double> b, int n_max,
                        const std::vector<double>& lf, std::vector<double>& logmag,
                        std::vector<double>& phase) {
    const double log_a = std::abs(a) > 0.0 ? std::log(std::abs(a)) : kNegInf;
    const double log_b = std::abs(b) > 0.0 ? std::log(std::abs(b)) : kNegInf;
    const double arg_a = std::arg(a), arg_b = std::arg(b);
    logmag.assign(n_max + 1, kNegInf);
    phase.assign(n_max + 1, 0.0);
    for (int p = 0; p <= n_max; ++p) {
        LogComplexSum sum;
        for (int i = 0; 2 * i <= p; ++i) {
            const int l = p - 2 * i;
            if (i > 0 && log_a == kNegInf) continue;
            if (l > 0 && log_b == kNegInf) continue;
            sum.add(pow_log(i, log_a) - lf[i] + pow_log(l, log_b) - lf[l],
                    i * arg_a + l * arg_b);
        }
        std::tie(logmag[p], phase[p]) = sum.total();
    }
}

TwoModeFock finish(Eigen::MatrixXcd amps) {
    TwoModeFock out;
    out.amps = std::move(amps);
    // Neumaier-compensated sum of |amp|^2: a naive sum over ~N^2 cells
    // carries rounding noise above the 1e-13 convergence test
    double sum = 0.0, comp = 0.0;
    for (Eigen::Index j = 0; j < out.amps.cols(); ++j) {
        for (Eigen::Index i = 0; i < out.amps.rows(); ++i) {
            const double x = std::norm(out.amps(i, j));
            const double t = sum + x;
            comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
            sum = t;
        }
    }
    out.mass = sum + comp;
    out.tail_bound = std::max(0.0, 1.0 - out.mass);
    out.normalized = true;
    return out;
}

template <typename Expand>
TwoModeFock certify(double margin, int start, int cap, double mass_tol,
                    const Expand& expand) {
    if (margin < kOracleMarginFloor) {
        std::ostringstream msg;
        msg << "physicality margin " << margin << " is below the oracle floor "
            << kOracleMarginFloor << "; the number-state tail decays too slowly";
        throw std::invalid_argument(msg.str());
    }
    TwoModeFock prev = expand(start);
    for (int n = 2 * start; n <= cap; n *= 2) {
        TwoModeFock cur = expand(n);
        if (std::abs(cur.total_mass() - prev.total_mass()) < mass_tol) return cur;
        prev = std::move(cur);
    }
    std::ostringstream msg;
    msg << "mass not converged to " << mass_tol << " within cutoff " << cap
        << "; increase the cutoff cap or the physicality margin";
    throw std::runtime_error(msg.str());
}

}  // namespace

TwoModeFock expand_core(const CoreParams& p, int n_a, int n_c) {
    if (n_a < 0 || n_c < 0) throw std::invalid_argument("cutoffs must be nonnegative");
    const auto lf = log_factorial_table(std::max(n_a, n_c));
    const double log_z = 0.5 * z_squared(p).log();  // Z real positive
    const double log_lambda = std::log(p.lambda);
    const double mu = p.mu();
    const std::complex<double> beta = p.beta();
    const double log_mu_half = mu > 0.0 ? std::log(0.5 * mu) : kNegInf;
    const double log_beta = std::abs(beta) > 0.0 ? std::log(std::abs(beta)) : kNegInf;
    const double arg_beta = std::arg(beta);

    Eigen::MatrixXcd amps = Eigen::MatrixXcd::Zero(n_a + 1, n_c + 1);
    for (int q = 0; q <= n_a; ++q) {
        for (int t = q; t <= n_c; ++t) {
            // <q,t| exp = Z lambda^q/q! sqrt(q!) sqrt(t!)
            //             * sum over 2p + r = t - q of (mu/2)^p/p! beta^r/r!
            LogComplexSum sum;
            for (int pi = 0; 2 * pi <= t - q; ++pi) {
                const int r = t - q - 2 * pi;
                if (pi > 0 && log_mu_half == kNegInf) continue;
                if (r > 0 && log_beta == kNegInf) continue;
                sum.add(pow_log(pi, log_mu_half) - lf[pi] + pow_log(r, log_beta) - lf[r],
                        r * arg_beta);
            }
            const auto [lm, ph] = sum.total();
            if (lm == kNegInf) continue;
            const double log_amp =
                log_z + q * log_lambda - 0.5 * lf[q] + 0.5 * lf[t] + lm;
            amps(q, t) = from_log_polar(log_amp, ph);
        }
    }
    return finish(std::move(amps));
}

TwoModeFock expand_core_certified(const CoreParams& p, int n_herald, double mass_tol) {
    if (n_herald < 0) throw std::invalid_argument("herald count must be nonnegative");
    return certify(p.feasibility_margin(), 4 * n_herald + 20, kCoreCutoffCap, mass_tol,
                   [&](int n) { return expand_core(p, n, n); });
}

Conditioned condition_on(const TwoModeFock& fock, int n) {
    if (n < 0 || n > fock.n_c())
        throw std::out_of_range("count lies beyond the expansion's truncation");
    const Eigen::VectorXcd column = fock.amps.col(n);
    const double mass = column.squaredNorm();
    if (mass <= 0.0)
        throw std::runtime_error("no amplitude mass at the requested count");
    return {LogProb::from_linear(mass), column / std::sqrt(mass)};
}

TwoModeFock expand_general(const GaussianPureState& g, int n_trunc) {
    if (g.modes() != 2) throw std::invalid_argument("expansion requires exactly 2 modes");
    if (n_trunc < 0) throw std::invalid_argument("cutoff must be nonnegative");
    const auto lf = log_factorial_table(n_trunc);
    const double log_z = 0.5 * normalization_z_sq(g).log();  // Z real positive

    // factor exp(A11 a+^2 + b1 a+) exp(A22 c+^2 + b2 c+) exp(2 A12 a+ c+):
    // amp(q,t) = Z sqrt(q! t!) sum_j (2A12)^j/j! u_{q-j} v_{t-j}
    std::vector<double> log_u, arg_u, log_v, arg_v;
    single_mode_series(g.A(0, 0), g.b(0), n_trunc, lf, log_u, arg_u);
    single_mode_series(g.A(1, 1), g.b(1), n_trunc, lf, log_v, arg_v);
    const std::complex<double> cross = 2.0 * g.A(0, 1);
    const double log_cross = std::abs(cross) > 0.0 ? std::log(std::abs(cross)) : kNegInf;
    const double arg_cross = std::arg(cross);

    Eigen::MatrixXcd amps = Eigen::MatrixXcd::Zero(n_trunc + 1, n_trunc + 1);
    for (int q = 0; q <= n_trunc; ++q) {
        for (int t = 0; t <= n_trunc; ++t) {
            LogComplexSum sum;
            const int j_max = std::min(q, t);
            for (int j = 0; j <= j_max; ++j) {
                if (j > 0 && log_cross == kNegInf) break;
                if (log_u[q - j] == kNegInf || log_v[t - j] == kNegInf) continue;
                sum.add(pow_log(j, log_cross) - lf[j] + log_u[q - j] + log_v[t - j],
                        j * arg_cross + arg_u[q - j] + arg_v[t - j]);
            }
            const auto [lm, ph] = sum.total();
            if (lm == kNegInf) continue;
            amps(q, t) = from_log_polar(log_z + 0.5 * lf[q] + 0.5 * lf[t] + lm, ph);
        }
    }
    return finish(std::move(amps));
}

TwoModeFock expand_general_certified(const GaussianPureState& g, double mass_tol) {
    return certify(physicality_margin(g), 20, kGeneralCutoffCap, mass_tol,
                   [&](int n) { return expand_general(g, n); });
}

double fock_fidelity(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    const double nu = u.squaredNorm(), nv = v.squaredNorm();
    if (nu <= 0.0 || nv <= 0.0)
        throw std::invalid_argument("fidelity of a zero vector is undefined");
    const Eigen::Index overlap_len = std::min(u.size(), v.size());
    const std::complex<double> dot =
        (u.head(overlap_len).adjoint() * v.head(overlap_len))(0, 0);
    return std::norm(dot) / (nu * nv);
}

}  // namespace herald
