#pragma once

#include <Eigen/Dense>
#include <complex>

#include "herald/gaussian_state.hpp"
#include "herald/log_domain.hpp"

namespace herald {

/// Two-mode core Gaussian state Z exp(mu/2 c+^2 + lambda a+ c+ + beta c+)|00>,
/// parametrized by the entangling strength lambda and the control parameters
/// (s0, delta0) of the heralded state (a+ + s0 a + delta0)^n |0>. lambda and
/// mu are real nonnegative by phase convention; delta0 may be complex.
struct CoreParams {
    double lambda;                 // in (0, 1)
    double s0;                     // >= 0
    std::complex<double> delta0;

    /// Validates 0 < lambda < 1, s0 >= 0 and lambda^2 (1 + s0) < 1.
    CoreParams(double lambda, double s0, std::complex<double> delta0);

    double mu() const { return lambda * lambda * s0; }
    std::complex<double> beta() const { return delta0 * lambda; }
    double lambda_sq() const { return lambda * lambda; }

    /// 1 - lambda^2 (1 + s0); positive for physical parameters.
    double feasibility_margin() const { return 1.0 - lambda * lambda * (1.0 + s0); }

    /// The same state as a generic (A, b) pair:
    /// A = [[0, lambda/2], [lambda/2, mu/2]], b = (0, beta).
    GaussianPureState to_gaussian() const;

    /// Gain g on the control mode: (lambda, mu, beta) -> (g lambda, g^2 mu,
    /// g beta). Leaves (s0, delta0), and hence the heralded state, unchanged.
    CoreParams rescaled(double gain) const;
};

/// ln|Z|^2 of the core state:
/// ln|Z|^2 = ln[(1-lambda^2)^2 - mu^2]/2
///           - [(1-lambda^2)|beta|^2 + Re(beta^2) mu] / [(1-lambda^2)^2 - mu^2]
LogProb z_squared(const CoreParams& p);

/// Normalized Fock expansion of (a+ + s0 a + delta0)^n |0> together with
/// ln<psi_n|psi_n>. For delta0 = 0 the state has the parity of n and the
/// off-parity coefficients are exact zeros.
struct PsiState {
    int n;
    Eigen::VectorXcd coeffs;  // size n+1, unit norm
    double log_norm_sq;
};

/// Builds |psi_n> by applying the operator n times in the Fock basis,
/// renormalizing after every application and accumulating the log norm.
PsiState psi_coefficients(int n, double s0, std::complex<double> delta0);

/// Closed-form norm for delta0 = 0:
/// ln<psi_n|psi_n> = ln sum_m [s0^m n! / (2^m m! sqrt((n-2m)!))]^2.
LogProb psi_norm_parity(int n, double s0);

/// ln L_n(-x) for x >= 0 through the positive-term series
/// sum_k C(n,k) x^k / k!, stable for n up to 1e6.
LogProb laguerre_neg(long n, double x);

}  // namespace herald
