#pragma once

#include <Eigen/Dense>
#include <complex>

#include "herald/core_state.hpp"
#include "herald/gaussian_state.hpp"
#include "herald/log_domain.hpp"

namespace herald {

/// Truncated two-mode Fock expansion. amps(k_a, k_c) = <k_a, k_c|state>,
/// rows = kept (signal) mode, columns = measured mode.
struct TwoModeFock {
    Eigen::MatrixXcd amps;
    double mass;        // captured probability, compensated summation
    double tail_bound;  // upper bound on the neglected probability mass
    bool normalized;    // built from a unit-norm state

    double total_mass() const { return mass; }
    int n_a() const { return static_cast<int>(amps.rows()) - 1; }
    int n_c() const { return static_cast<int>(amps.cols()) - 1; }
};

/// Physicality margins below this are refused by the certified expansions:
/// the photon-number tail decays too slowly to truncate reliably.
inline constexpr double kOracleMarginFloor = 0.05;

/// Expand exp(mu/2 c+^2 + lambda a+ c+ + beta c+)|00> up to |n_a, n_c> by
/// direct triple summation of the exponential series. Each term is
/// assembled as log-magnitude plus phase, so any truncation size is
/// overflow-safe. tail_bound = 1 - captured mass (Z supplies exact
/// normalization).
TwoModeFock expand_core(const CoreParams& p, int n_a, int n_c);

/// Adaptive variant: starts at n_a = n_c = 4 n_herald + 20 and doubles the
/// cutoff until the captured mass changes by less than mass_tol between
/// rounds. Throws if the margin is below kOracleMarginFloor or the cutoff
/// cap is hit before certification.
TwoModeFock expand_core_certified(const CoreParams& p, int n_herald,
                                  double mass_tol = 1e-13);

struct Conditioned {
    LogProb probability;        // P(count n in the measured mode)
    Eigen::VectorXcd state;     // normalized kept-mode state
};

/// Project the measured mode on |n>: probability = |column n|^2, state =
/// column n normalized. Throws when n exceeds the truncation.
Conditioned condition_on(const TwoModeFock& fock, int n);

/// Expand a general two-mode Gaussian pure state Z exp(a+^T A a+ +
/// b^T a+)|0> up to |n_trunc, n_trunc>.
TwoModeFock expand_general(const GaussianPureState& g, int n_trunc);

/// Adaptive doubling, as expand_core_certified.
TwoModeFock expand_general_certified(const GaussianPureState& g,
                                     double mass_tol = 1e-13);

/// Fidelity |<u|v>|^2 between normalized Fock vectors, padding the shorter
/// with zeros.
double fock_fidelity(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v);

}  // namespace herald
