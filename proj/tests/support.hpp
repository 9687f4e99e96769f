#pragma once

// Shared random-instance generators for the test binaries. Seeds are fixed
// by each caller so failures reproduce exactly.

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace test_support {

inline std::complex<double> random_complex(std::mt19937& rng, double radius) {
    std::uniform_real_distribution<double> dist(-radius, radius);
    return {dist(rng), dist(rng)};
}

inline Eigen::MatrixXcd random_symmetric(std::mt19937& rng, Eigen::Index m,
                                         double scale) {
    Eigen::MatrixXcd a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i; j < m; ++j) a(i, j) = a(j, i) = random_complex(rng, scale);
    return a;
}

// symmetric A rescaled so its largest singular value is sigma_target; the
// state is physical iff sigma_target < 1/2
inline Eigen::MatrixXcd random_squeezing(std::mt19937& rng, Eigen::Index m,
                                         double sigma_target) {
    Eigen::MatrixXcd a = random_symmetric(rng, m, 1.0);
    const double top = a.jacobiSvd().singularValues()(0);
    return a * (sigma_target / top);
}

inline Eigen::VectorXcd random_vector(std::mt19937& rng, Eigen::Index m, double radius) {
    Eigen::VectorXcd b(m);
    for (Eigen::Index i = 0; i < m; ++i) b(i) = random_complex(rng, radius);
    return b;
}

}  // namespace test_support
