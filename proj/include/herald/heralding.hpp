#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "herald/core_state.hpp"
#include "herald/log_domain.hpp"

namespace herald {

/// How an optimum was obtained. The closed forms cover delta0 = 0 and
/// s0 = 0; the general case solves the quartic extremality polynomial.
/// golden_section is the fallback when no feasible polynomial root exists,
/// boundary_vacuum the degenerate n = 0 case (supremum at lambda -> 0).
enum class OptMethod {
    closed_form_parity,
    closed_form_added,
    polynomial_general,
    golden_section,
    boundary_vacuum,
};

std::string to_string(OptMethod m);

struct CandidateRoot {
    double lambda_sq;
    bool feasible;
    double log_pn;  // NaN when infeasible (never evaluated there)
};

struct OptResult {
    double lambda_sq_opt;
    double log_pn;
    std::vector<CandidateRoot> candidate_roots;
    OptMethod method;
    double feasibility_margin;          // 1 - lambda_sq_opt (1 + s0)
    bool multiple_local_maxima = false; // more than one feasible interior maximum

    /// exp(log_pn), or 0 when below the linear floor.
    double pn() const { return LogProb::from_log(log_pn).linear(); }
};

/// ln P_n = 2n ln lambda - ln n! + ln|Z|^2 + ln<psi_n|psi_n>.
/// Dispatches the norm to the parity closed form (delta0 = 0), the Laguerre
/// series (s0 = 0), or the Fock recurrence otherwise.
LogProb log_pn(const CoreParams& p, int n);

/// The lambda-independent norm term ln<psi_n|psi_n>, same route dispatch as
/// log_pn. Split out so optimizers can evaluate many lambda per n cheaply.
double log_psi_norm_sq(int n, double s0, std::complex<double> delta0);

/// Closed-form optimum for delta0 = 0 (quadratic extremality equation):
/// lambda^2 = 2n / (2n + 1 + sqrt(1 + 4n(n+1) s0^2)), the minus-sign root
/// written in cancellation-free form; equals n/(2n+1) at s0 = 1 and
/// n/(n+1) at s0 = 0.
OptResult optimize_parity(int n, double s0);

/// Closed-form optimum for s0 = 0 (photon-added coherent states),
/// lambda^2 = 2n / (2n + 1 + |alpha|^2 + sqrt((1+|alpha|^2)^2 + 4n|alpha|^2)).
OptResult optimize_added(int n, double alpha_abs);

/// General case: solves the quartic in lambda^2 from the extremality
/// condition, evaluates ln P_n at every feasible real root and returns the
/// argmax. Falls back to golden-section search when no feasible root exists.
OptResult optimize_general(int n, double s0, std::complex<double> delta0);

/// Routes to the cheapest optimizer the parameters admit: the closed forms
/// for delta0 = 0 or s0 = 0, the quartic otherwise.
OptResult optimize_auto(int n, double s0, std::complex<double> delta0);

/// Quartic coefficients (ascending powers of x = lambda^2) of the
/// extremality equation; exposed for diagnostics and tests.
std::array<double, 5> extremality_coefficients(int n, double s0, std::complex<double> delta0);

enum class AsymptoticRegime {
    parity_s1,  // P_n ~ e^{-1/2} / (sqrt(2 pi) n)
    fock_s0,    // P_n ~ 1 / (e n)
    added,      // P_n ~ sqrt(|alpha|) / (2 sqrt(pi) n^{3/4})
};

/// Closed asymptotic ln P_n. param must be 0 for parity_s1/fock_s0 and
/// |alpha| > 0 for added.
LogProb asymptotic_pn(AsymptoticRegime regime, long n, double param = 0.0);

/// Least-squares fit of ln P_n = ln(prefactor) - gamma ln n.
struct ScalingFit {
    double gamma;
    double prefactor;
    long n_min, n_max;
    double residual;  // RMS of fit errors in ln P_n
};

/// Requires at least 5 points with strictly increasing n.
ScalingFit fit_gamma(std::span<const std::pair<long, double>> points);

}  // namespace herald
