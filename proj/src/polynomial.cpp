#include "herald/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace herald {

double polynomial_eval(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double polynomial_derivative_eval(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;)
        acc = acc * x + static_cast<double>(k) * coeffs[k];
    return acc;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
    double max_abs = 0.0;
    for (double c : coeffs) max_abs = std::max(max_abs, std::abs(c));
    if (max_abs == 0.0) return {};

    // effective degree: ignore leading coefficients that are numerically zero
    // relative to the polynomial's scale (a degenerate quartic is solved at
    // its true degree)
    std::size_t top = coeffs.size();
    while (top > 0 && std::abs(coeffs[top - 1]) < 1e-12 * max_abs) --top;
    if (top <= 1) return {};
    const std::size_t deg = top - 1;

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (std::size_t k = 0; k + 1 < deg; ++k) companion(k + 1, k) = 1.0;
    for (std::size_t k = 0; k < deg; ++k)
        companion(k, deg - 1) = -coeffs[k] / coeffs[deg];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(deg);
    for (std::size_t k = 0; k < deg; ++k) roots[k] = solver.eigenvalues()(k);
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

namespace {

double newton_polish(std::span<const double> coeffs, double x) {
    for (int it = 0; it < 8; ++it) {
        const double f = polynomial_eval(coeffs, x);
        const double df = polynomial_derivative_eval(coeffs, x);
        if (df == 0.0) break;
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

}  // namespace

std::vector<double> real_roots_in(std::span<const double> coeffs, double lo, double hi,
                                  double imag_tol) {
    std::vector<double> out;
    for (const auto& r : polynomial_roots(coeffs)) {
        if (std::abs(r.imag()) > imag_tol) continue;
        const double x = newton_polish(coeffs, r.real());
        if (x > lo && x < hi) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) {
                              return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a));
                          }),
              out.end());
    return out;
}

}  // namespace herald
