#pragma once

#include <complex>
#include <span>
#include <vector>

namespace herald {

/// p(x) = sum_k coeffs[k] x^k by Horner's rule.
double polynomial_eval(std::span<const double> coeffs, double x);

double polynomial_derivative_eval(std::span<const double> coeffs, double x);

/// All roots of the polynomial via companion-matrix eigenvalues. Leading
/// coefficients with |c| < 1e-12 * max|c| are dropped first, so a degenerate
/// quartic is solved at its true degree. Degree 0 gives no roots.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Real roots inside (lo, hi): eigenvalues with |imag| <= imag_tol, Newton
/// polished against the polynomial, deduplicated.
std::vector<double> real_roots_in(std::span<const double> coeffs, double lo, double hi,
                                  double imag_tol = 1e-9);

}  // namespace herald
