#pragma once

#include <Eigen/Dense>
#include <complex>

#include "herald/log_domain.hpp"
#include "json.hpp"

namespace herald {

/// Pure M-mode Gaussian state Z exp(a+^T A a+ + b^T a+)|0>, written in the
/// creation-operator (Bargmann) representation. A is complex symmetric and
/// fixes the squeezing, b the coherent displacement. The normalization Z is
/// not stored; see normalization_z_sq().
struct GaussianPureState {
    Eigen::MatrixXcd A;
    Eigen::VectorXcd b;

    /// Validates shapes and symmetrizes A (asymmetry above 1e-12 is an error).
    GaussianPureState(Eigen::MatrixXcd A_in, Eigen::VectorXcd b_in);

    Eigen::Index modes() const { return A.rows(); }

    static GaussianPureState vacuum(Eigen::Index modes);
};

/// Smallest eigenvalue of I - 4 A A^dag. The state is physical iff > 0.
double physicality_margin(const GaussianPureState& state);

// margin floors: "physical" means margin > kPhysicalTol; operations that
// invert I - 4AA^dag refuse margins below kInvertTol (inverse amplifies
// error by 1/margin)
inline constexpr double kPhysicalTol = 1e-12;
inline constexpr double kInvertTol = 1e-10;

/// Coherent displacements alpha = [I - 4AA^dag]^{-1} (b + 2 A b*).
Eigen::VectorXcd displacement_alpha(const GaussianPureState& state);

/// |Z|^2 with Z = [det(I - 4AA^dag)]^{1/4} exp(-alpha^dag alpha / 2
/// + alpha^dag A alpha*), chosen so <G|G> = 1. Phase convention: Z is the
/// real positive square root of the returned value.
LogProb normalization_z_sq(const GaussianPureState& state);

/// Per-mode gains for the trailing (measured) modes: the full scaling is
/// H = diag(1,...,1, g_1,...,g_K) over N unmeasured + K measured modes.
struct GainVector {
    Eigen::VectorXd g;

    explicit GainVector(Eigen::VectorXd gains);
    static GainVector uniform(Eigen::Index measured_modes, double gain);
    Eigen::Index measured_modes() const { return g.size(); }
};

/// Gain scaling A -> HAH, b -> Hb. Leaves the conditional state in the
/// unmeasured modes unchanged while rescaling heralding probabilities.
/// Throws if the transformed state is unphysical, reporting the largest
/// feasible uniform gain.
GaussianPureState h_transform(const GaussianPureState& state, const GainVector& gains);

// JSON wire format: {"M": int, "A": [[{"re","im"},...],...], "b": [{"re","im"},...]}
nlohmann::json to_json(const GaussianPureState& state);
GaussianPureState state_from_json(const nlohmann::json& j);

}  // namespace herald
