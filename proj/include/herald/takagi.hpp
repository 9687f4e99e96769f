#pragma once

#include <Eigen/Dense>

namespace herald {

/// Autonne-Takagi factorization of a complex symmetric matrix:
/// V^T A V = diag(d) with V unitary and d real nonnegative, sorted
/// descending. Reconstruction identity: A = V* diag(d) V^dag.
struct TakagiDecomposition {
    Eigen::MatrixXcd V;
    Eigen::VectorXd d;
    double reconstruction_residual;  // Frobenius norm of A - V* diag(d) V^dag
};

TakagiDecomposition takagi(const Eigen::MatrixXcd& A);

/// Single-mode squeezing constants read off the Takagi values:
/// mu_j = 2 d_j = tanh(r_j). Requires all mu_j < 1.
struct SqueezingSpectrum {
    Eigen::VectorXd mu;
    Eigen::VectorXd r;
};

SqueezingSpectrum squeezing_params(const TakagiDecomposition& dec);

}  // namespace herald
