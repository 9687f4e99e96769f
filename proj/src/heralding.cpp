#include "herald/heralding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "herald/polynomial.hpp"

namespace herald {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// band of acceptable lambda^2 roots; boundary suprema are left to the
// golden-section fallback
constexpr double kRootPad = 1e-12;
constexpr double kRootImagTol = 1e-9;

double log_pn_at(double lambda_sq, int n, double s0, std::complex<double> delta0,
                 double log_norm_sq) {
    const CoreParams p(std::sqrt(lambda_sq), s0, delta0);
    return n * std::log(lambda_sq) - log_factorial(n) + z_squared(p).log() + log_norm_sq;
}

OptResult vacuum_boundary() {
    // P_0 -> 1 as lambda -> 0: a supremum at the domain edge, not a root
    OptResult out;
    out.lambda_sq_opt = 0.0;
    out.log_pn = 0.0;
    out.method = OptMethod::boundary_vacuum;
    out.feasibility_margin = 1.0;
    return out;
}

void require_counts(int n, double s0) {
    if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
    if (!(s0 >= 0.0)) throw std::invalid_argument("s0 must be nonnegative");
}

}  // namespace

std::string to_string(OptMethod m) {
    switch (m) {
        case OptMethod::closed_form_parity: return "closed_form_parity";
        case OptMethod::closed_form_added: return "closed_form_added";
        case OptMethod::polynomial_general: return "polynomial_general";
        case OptMethod::golden_section: return "golden_section";
        case OptMethod::boundary_vacuum: return "boundary_vacuum";
    }
    return "unknown";
}

double log_psi_norm_sq(int n, double s0, std::complex<double> delta0) {
    require_counts(n, s0);
    if (n == 0) return 0.0;
    if (delta0 == std::complex<double>(0.0)) return psi_norm_parity(n, s0).log();
    if (s0 == 0.0) return log_factorial(n) + laguerre_neg(n, std::norm(delta0)).log();
    return psi_coefficients(n, s0, delta0).log_norm_sq;
}

LogProb log_pn(const CoreParams& p, int n) {
    if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
    return LogProb::from_log(n * std::log(p.lambda_sq()) - log_factorial(n) +
                             z_squared(p).log() + log_psi_norm_sq(n, p.s0, p.delta0));
}

OptResult optimize_parity(int n, double s0) {
    require_counts(n, s0);
    if (n == 0) return vacuum_boundary();
    // minus-sign root of the quadratic extremality equation, written without
    // the (1 - s0^2) denominator so s0 = 1 needs no special case
    const double nd = n;
    const double disc = std::sqrt(1.0 + 4.0 * nd * (nd + 1.0) * s0 * s0);
    const double x = 2.0 * nd / (2.0 * nd + 1.0 + disc);

    OptResult out;
    out.lambda_sq_opt = x;
    out.log_pn = log_pn_at(x, n, s0, 0.0, log_psi_norm_sq(n, s0, 0.0));
    out.candidate_roots = {{x, true, out.log_pn}};
    out.method = OptMethod::closed_form_parity;
    out.feasibility_margin = 1.0 - x * (1.0 + s0);
    return out;
}

OptResult optimize_added(int n, double alpha_abs) {
    if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
    if (!(alpha_abs >= 0.0)) throw std::invalid_argument("|alpha| must be nonnegative");
    if (n == 0) return vacuum_boundary();
    const double nd = n, w = alpha_abs * alpha_abs;
    const double disc = std::sqrt((1.0 + w) * (1.0 + w) + 4.0 * nd * w);
    const double x = 2.0 * nd / (2.0 * nd + 1.0 + w + disc);

    OptResult out;
    out.lambda_sq_opt = x;
    out.log_pn = log_pn_at(x, n, 0.0, alpha_abs, log_psi_norm_sq(n, 0.0, alpha_abs));
    out.candidate_roots = {{x, true, out.log_pn}};
    out.method = OptMethod::closed_form_added;
    out.feasibility_margin = 1.0 - x;
    return out;
}

std::array<double, 5> extremality_coefficients(int n, double s0,
                                               std::complex<double> delta0) {
    const double nd = n;
    const double w = std::norm(delta0);
    const double r = (delta0 * delta0).real();
    const double q = 1.0 - s0 * s0;
    return {
        nd,
        -(1.0 + w + 4.0 * nd),
        2.0 * w + 4.0 * nd + 3.0 - s0 * s0 + 2.0 * nd * q - 2.0 * r * s0,
        -(q * (3.0 + 4.0 * nd) + w * (1.0 + s0 * s0) - 2.0 * r * s0),
        q * q * (nd + 1.0),
    };
}

OptResult optimize_general(int n, double s0, std::complex<double> delta0) {
    require_counts(n, s0);
    if (n == 0) return vacuum_boundary();

    const double log_norm = log_psi_norm_sq(n, s0, delta0);
    const auto score = [&](double x) { return log_pn_at(x, n, s0, delta0, log_norm); };

    const auto coeffs = extremality_coefficients(n, s0, delta0);
    const double hi = 1.0 / (1.0 + s0) - kRootPad;
    const std::vector<double> feasible = real_roots_in(coeffs, kRootPad, hi, kRootImagTol);

    OptResult out;
    for (double x : feasible) out.candidate_roots.push_back({x, true, score(x)});
    for (const auto& r : polynomial_roots(coeffs)) {
        if (std::abs(r.imag()) > kRootImagTol) continue;
        const double x = r.real();
        const bool near_feasible =
            std::any_of(feasible.begin(), feasible.end(), [&](double f) {
                return std::abs(f - x) <= 1e-9 * (1.0 + std::abs(f));
            });
        if (!near_feasible) out.candidate_roots.push_back({x, false, kNan});
    }

    if (feasible.empty()) {
        // stationary point missed by the polynomial (or supremum at the
        // boundary): bounded golden-section maximization
        const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = 1e-10, b = (1.0 - 1e-10) / (1.0 + s0);
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = score(c), fd = score(d);
        while (b - a > 1e-14 * std::max(1.0, b)) {
            if (fc > fd) {
                b = d; d = c; fd = fc;
                c = b - inv_phi * (b - a);
                fc = score(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + inv_phi * (b - a);
                fd = score(d);
            }
        }
        out.lambda_sq_opt = 0.5 * (a + b);
        out.log_pn = score(out.lambda_sq_opt);
        out.method = OptMethod::golden_section;
    } else {
        std::size_t best = 0;
        for (std::size_t k = 1; k < feasible.size(); ++k)
            if (out.candidate_roots[k].log_pn > out.candidate_roots[best].log_pn) best = k;
        out.lambda_sq_opt = feasible[best];
        out.log_pn = out.candidate_roots[best].log_pn;
        out.method = OptMethod::polynomial_general;

        if (feasible.size() >= 2) {
            int maxima = 0;
            for (std::size_t k = 0; k < feasible.size(); ++k) {
                const double x = feasible[k], h = 1e-7;
                if (x - h <= 0.0 || x + h >= hi) continue;
                const double curve = score(x + h) + score(x - h) -
                                     2.0 * out.candidate_roots[k].log_pn;
                if (curve < 0.0) ++maxima;
            }
            out.multiple_local_maxima = maxima >= 2;
        }
    }
    out.feasibility_margin = 1.0 - out.lambda_sq_opt * (1.0 + s0);
    return out;
}

OptResult optimize_auto(int n, double s0, std::complex<double> delta0) {
    if (delta0 == std::complex<double>(0.0)) return optimize_parity(n, s0);
    if (s0 == 0.0) return optimize_added(n, std::abs(delta0));
    return optimize_general(n, s0, delta0);
}

LogProb asymptotic_pn(AsymptoticRegime regime, long n, double param) {
    if (n < 1) throw std::invalid_argument("asymptotics need n >= 1");
    const double ln_n = std::log(static_cast<double>(n));
    switch (regime) {
        case AsymptoticRegime::parity_s1:
            if (param != 0.0)
                throw std::invalid_argument("the s0 = 1 asymptote takes no parameter");
            return LogProb::from_log(-0.5 - 0.5 * std::log(2.0 * std::numbers::pi) - ln_n);
        case AsymptoticRegime::fock_s0:
            if (param != 0.0)
                throw std::invalid_argument("the Fock-state asymptote takes no parameter");
            return LogProb::from_log(-1.0 - ln_n);
        case AsymptoticRegime::added:
            if (!(param > 0.0))
                throw std::invalid_argument("the photon-added asymptote needs |alpha| > 0");
            return LogProb::from_log(0.5 * std::log(param) - std::log(2.0) -
                                     0.5 * std::log(std::numbers::pi) - 0.75 * ln_n);
    }
    throw std::invalid_argument("unknown asymptotic regime");
}

ScalingFit fit_gamma(std::span<const std::pair<long, double>> points) {
    if (points.size() < 5)
        throw std::invalid_argument("scaling fit needs at least 5 points");
    for (std::size_t k = 1; k < points.size(); ++k)
        if (points[k].first <= points[k - 1].first)
            throw std::invalid_argument("scaling fit needs strictly increasing n");

    const double count = static_cast<double>(points.size());
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (const auto& [n, log_p] : points) {
        const double t = std::log(static_cast<double>(n));
        st += t;
        sy += log_p;
        stt += t * t;
        sty += t * log_p;
    }
    const double slope = (count * sty - st * sy) / (count * stt - st * st);
    const double intercept = (sy - slope * st) / count;

    double rss = 0.0;
    for (const auto& [n, log_p] : points) {
        const double err = log_p - (intercept + slope * std::log(static_cast<double>(n)));
        rss += err * err;
    }

    ScalingFit fit;
    fit.gamma = -slope;
    fit.prefactor = std::exp(intercept);
    fit.n_min = points.front().first;
    fit.n_max = points.back().first;
    fit.residual = std::sqrt(rss / count);
    return fit;
}

}  // namespace herald
