#include "herald/core_state.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace herald {

CoreParams::CoreParams(double lambda_in, double s0_in, std::complex<double> delta0_in)
    : lambda(lambda_in), s0(s0_in), delta0(delta0_in) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("lambda must lie in (0, 1)");
    if (!(s0 >= 0.0)) throw std::invalid_argument("s0 must be nonnegative");
    if (!(feasibility_margin() > 0.0))
        throw std::invalid_argument("unphysical parameters: lambda^2 (1 + s0) must be < 1");
}

GaussianPureState CoreParams::to_gaussian() const {
    Eigen::MatrixXcd a(2, 2);
    a << 0.0, 0.5 * lambda, 0.5 * lambda, 0.5 * mu();
    Eigen::VectorXcd b(2);
    b << 0.0, beta();
    return GaussianPureState(std::move(a), std::move(b));
}

CoreParams CoreParams::rescaled(double gain) const {
    if (!(gain > 0.0)) throw std::invalid_argument("gain must be positive");
    return CoreParams(lambda * gain, s0, delta0);
}

LogProb z_squared(const CoreParams& p) {
    const double one_ls = 1.0 - p.lambda_sq();
    const double m = p.mu();
    // (1-l^2)^2 - mu^2 = margin * (1 - l^2 + mu) stays positive for physical p
    const double denom = one_ls * one_ls - m * m;
    const std::complex<double> beta = p.beta();
    const double beta_sq_re = (beta * beta).real();
    const double log_val =
        0.5 * std::log(denom) - (one_ls * std::norm(beta) + beta_sq_re * m) / denom;
    return LogProb::from_log(log_val);
}

PsiState psi_coefficients(int n, double s0, std::complex<double> delta0) {
    if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
    PsiState out;
    out.n = n;
    out.log_norm_sq = 0.0;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
    c(0) = 1.0;
    for (int step = 1; step <= n; ++step) {
        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(n + 1);
        for (int m = 0; m < step; ++m) {
            if (c(m) == std::complex<double>(0.0)) continue;
            next(m + 1) += c(m) * std::sqrt(m + 1.0);          // a+ |m> = sqrt(m+1)|m+1>
            if (m > 0) next(m - 1) += c(m) * (s0 * std::sqrt(static_cast<double>(m)));
            next(m) += c(m) * delta0;
        }
        const double norm_sq = next.squaredNorm();
        out.log_norm_sq += std::log(norm_sq);
        c = next / std::sqrt(norm_sq);
    }
    out.coeffs = std::move(c);
    return out;
}

LogProb psi_norm_parity(int n, double s0) {
    if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
    const double log_nfact = log_factorial(n);
    std::vector<double> terms;
    terms.reserve(n / 2 + 1);
    const double log_s0 = s0 > 0.0 ? std::log(s0) : 0.0;
    for (int m = 0; m <= n / 2; ++m) {
        if (s0 == 0.0 && m > 0) break;
        const double log_term = log_nfact - m * std::log(2.0) - log_factorial(m) -
                                0.5 * log_factorial(n - 2 * m) + m * log_s0;
        terms.push_back(2.0 * log_term);
    }
    return LogProb::from_log(log_sum_exp(terms));
}

LogProb laguerre_neg(long n, double x) {
    if (n < 0) throw std::invalid_argument("degree must be nonnegative");
    if (x < 0.0) throw std::invalid_argument("argument must be nonnegative");
    if (x == 0.0 || n == 0) return LogProb::from_log(0.0);  // L_n(0) = 1
    // L_n(-x) = sum_k C(n,k) x^k / k!, every term positive
    const double log_x = std::log(x);
    std::vector<double> terms;
    terms.reserve(n + 1);
    for (long k = 0; k <= n; ++k)
        terms.push_back(log_binomial(n, k) + k * log_x - log_factorial(k));
    return LogProb::from_log(log_sum_exp(terms));
}

}  // namespace herald
