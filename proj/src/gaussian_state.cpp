#include "herald/gaussian_state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace herald {

namespace {

using Cd = std::complex<double>;

Eigen::MatrixXcd gram_complement(const GaussianPureState& state) {
    const Eigen::Index m = state.modes();
    return Eigen::MatrixXcd::Identity(m, m) - 4.0 * state.A * state.A.adjoint();
}

}  // namespace

GaussianPureState::GaussianPureState(Eigen::MatrixXcd A_in, Eigen::VectorXcd b_in)
    : A(std::move(A_in)), b(std::move(b_in)) {
    if (A.rows() == 0 || A.rows() != A.cols())
        throw std::invalid_argument("squeezing matrix must be square and nonempty");
    if (b.size() != A.rows())
        throw std::invalid_argument("displacement vector length must match the mode count");
    const Eigen::MatrixXcd At = A.transpose();
    const double scale = 1.0 + A.cwiseAbs().maxCoeff();
    if ((A - At).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("squeezing matrix must be symmetric");
    A = 0.5 * (A + At);
}

GaussianPureState GaussianPureState::vacuum(Eigen::Index modes) {
    return GaussianPureState(Eigen::MatrixXcd::Zero(modes, modes),
                             Eigen::VectorXcd::Zero(modes));
}

double physicality_margin(const GaussianPureState& state) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram_complement(state));
    return solver.eigenvalues().minCoeff();
}

Eigen::VectorXcd displacement_alpha(const GaussianPureState& state) {
    const double margin = physicality_margin(state);
    if (margin <= kInvertTol) {
        std::ostringstream msg;
        msg << "state too close to the physicality boundary to invert (margin "
            << margin << ")";
        throw std::runtime_error(msg.str());
    }
    const Eigen::VectorXcd rhs = state.b + 2.0 * state.A * state.b.conjugate();
    return gram_complement(state).ldlt().solve(rhs);
}

LogProb normalization_z_sq(const GaussianPureState& state) {
    const Eigen::MatrixXcd c = gram_complement(state);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(c);
    const double margin = solver.eigenvalues().minCoeff();
    if (margin <= kInvertTol) {
        std::ostringstream msg;
        msg << "state too close to the physicality boundary to normalize (margin "
            << margin << ")";
        throw std::runtime_error(msg.str());
    }
    double log_det = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k)
        log_det += std::log(solver.eigenvalues()(k));

    const Eigen::VectorXcd alpha =
        c.ldlt().solve(state.b + 2.0 * state.A * state.b.conjugate());
    const Cd exponent = -0.5 * Cd(alpha.squaredNorm(), 0.0) +
                        (alpha.adjoint() * state.A * alpha.conjugate())(0, 0);
    return LogProb::from_log(0.5 * log_det + 2.0 * exponent.real());
}

GainVector::GainVector(Eigen::VectorXd gains) : g(std::move(gains)) {
    if (g.size() == 0) throw std::invalid_argument("gain vector must be nonempty");
    if ((g.array() <= 0.0).any())
        throw std::invalid_argument("gains must be strictly positive");
}

GainVector GainVector::uniform(Eigen::Index measured_modes, double gain) {
    return GainVector(Eigen::VectorXd::Constant(measured_modes, gain));
}

GaussianPureState h_transform(const GaussianPureState& state, const GainVector& gains) {
    const Eigen::Index m = state.modes();
    const Eigen::Index k = gains.measured_modes();
    if (k > m)
        throw std::invalid_argument("more gains than modes");

    const auto scaled = [&](double uniform_override) {
        Eigen::VectorXcd h = Eigen::VectorXcd::Ones(m);
        if (uniform_override > 0.0)
            h.tail(k).setConstant(Cd(uniform_override, 0.0));
        else
            h.tail(k) = gains.g.cast<Cd>();
        const Eigen::MatrixXcd a2 = h.asDiagonal() * state.A * h.asDiagonal();
        const Eigen::VectorXcd b2 = h.asDiagonal() * state.b;
        return GaussianPureState(a2, b2);
    };

    GaussianPureState out = scaled(0.0);
    if (physicality_margin(out) > kPhysicalTol) return out;

    // report the supremum of physical uniform gains as a repair hint; gain 0
    // decouples the measured modes and is always physical
    double lo = 0.0, hi = std::max(1.0, gains.g.maxCoeff());
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (physicality_margin(scaled(mid)) > kPhysicalTol ? lo : hi) = mid;
    }
    std::ostringstream msg;
    msg << "gain drives the state unphysical; largest feasible uniform gain ~ " << lo;
    throw std::runtime_error(msg.str());
}

nlohmann::json to_json(const GaussianPureState& state) {
    const Eigen::Index m = state.modes();
    nlohmann::json a_rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m; ++j)
            row.push_back({{"re", state.A(i, j).real()}, {"im", state.A(i, j).imag()}});
        a_rows.push_back(std::move(row));
    }
    nlohmann::json b_entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m; ++i)
        b_entries.push_back({{"re", state.b(i).real()}, {"im", state.b(i).imag()}});
    return {{"M", m}, {"A", std::move(a_rows)}, {"b", std::move(b_entries)}};
}

GaussianPureState state_from_json(const nlohmann::json& j) {
    const Eigen::Index m = j.at("M").get<Eigen::Index>();
    if (m <= 0) throw std::invalid_argument("mode count must be positive");
    Eigen::MatrixXcd a(m, m);
    Eigen::VectorXcd b(m);
    const auto& a_rows = j.at("A");
    const auto& b_entries = j.at("b");
    if (static_cast<Eigen::Index>(a_rows.size()) != m ||
        static_cast<Eigen::Index>(b_entries.size()) != m)
        throw std::invalid_argument("matrix/vector sizes disagree with the mode count");
    for (Eigen::Index i = 0; i < m; ++i) {
        if (static_cast<Eigen::Index>(a_rows[i].size()) != m)
            throw std::invalid_argument("squeezing matrix row has wrong length");
        for (Eigen::Index jj = 0; jj < m; ++jj)
            a(i, jj) = Cd(a_rows[i][jj].at("re").get<double>(),
                          a_rows[i][jj].at("im").get<double>());
        b(i) = Cd(b_entries[i].at("re").get<double>(), b_entries[i].at("im").get<double>());
    }
    return GaussianPureState(std::move(a), std::move(b));
}

}  // namespace herald
