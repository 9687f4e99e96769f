#include "herald/takagi.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace herald {

namespace {

// Real 2M-vector embedding of the conjugate-eigenvalue problem A w = sigma w*:
// with A = X + iY and B = [[X, Y], [Y, -X]], the eigenpair (sigma, [u; v])
// of B yields w = u - iv. J[u; v] = [-v; u] maps the sigma-eigenspace onto
// the (-sigma)-eigenspace, so the spectrum of B is symmetric about zero.
Eigen::VectorXd apply_j(const Eigen::VectorXd& x) {
    const Eigen::Index m = x.size() / 2;
    Eigen::VectorXd out(2 * m);
    out.head(m) = -x.tail(m);
    out.tail(m) = x.head(m);
    return out;
}

TakagiDecomposition build(const Eigen::MatrixXcd& a, double zero_tol) {
    const Eigen::Index m = a.rows();
    Eigen::MatrixXd big(2 * m, 2 * m);
    big.topLeftCorner(m, m) = a.real();
    big.topRightCorner(m, m) = a.imag();
    big.bottomLeftCorner(m, m) = a.imag();
    big.bottomRightCorner(m, m) = -a.real();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(big);
    const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
    const double scale = std::max(1.0, std::abs(evals(2 * m - 1)));
    const double tol = zero_tol * scale;

    TakagiDecomposition dec;
    dec.V.resize(m, m);
    dec.d.resize(m);

    Eigen::Index col = 0;
    for (Eigen::Index k = 2 * m - 1; k >= 0 && evals(k) > tol; --k, ++col) {
        const Eigen::VectorXd x = solver.eigenvectors().col(k);
        dec.V.col(col) = x.head(m) - std::complex<double>(0, 1) * x.tail(m);
        dec.d(col) = evals(k);
    }

    if (col < m) {
        // Null space of B (dimension 2(m - col)) is J-invariant; extract
        // m - col real vectors orthogonal to each other and to their J
        // images, so the resulting complex columns stay orthonormal.
        std::vector<Eigen::VectorXd> candidates;
        for (Eigen::Index k = 0; k < 2 * m; ++k)
            if (std::abs(evals(k)) <= tol)
                candidates.push_back(solver.eigenvectors().col(k));
        std::vector<Eigen::VectorXd> kept;
        while (col + static_cast<Eigen::Index>(kept.size()) < m) {
            Eigen::VectorXd best;
            double best_norm = -1.0;
            for (const auto& cand : candidates) {
                Eigen::VectorXd y = cand;
                for (const auto& x : kept) {
                    y -= x.dot(y) * x;
                    const Eigen::VectorXd jx = apply_j(x);
                    y -= jx.dot(y) * jx;
                }
                const double nrm = y.norm();
                if (nrm > best_norm) {
                    best_norm = nrm;
                    best = std::move(y);
                }
            }
            if (best_norm < 1e-8)
                throw std::runtime_error("null-space separation failed in the Takagi factorization");
            kept.push_back(best / best_norm);
        }
        for (const auto& x : kept) {
            dec.V.col(col) = x.head(m) - std::complex<double>(0, 1) * x.tail(m);
            dec.d(col) = 0.0;
            ++col;
        }
    }

    dec.reconstruction_residual =
        (a - dec.V.conjugate() * dec.d.asDiagonal() * dec.V.adjoint()).norm();
    return dec;
}

}  // namespace

TakagiDecomposition takagi(const Eigen::MatrixXcd& a) {
    if (a.rows() == 0 || a.rows() != a.cols())
        throw std::invalid_argument("matrix must be square and nonempty");
    const double scale = 1.0 + a.cwiseAbs().maxCoeff();
    if ((a - a.transpose().eval()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("matrix must be complex symmetric");
    const Eigen::MatrixXcd sym = 0.5 * (a + a.transpose().eval());

    TakagiDecomposition dec = build(sym, 1e-9);
    if (dec.reconstruction_residual > 1e-8 * scale) {
        // near-zero +/- pairs straddling the tight tolerance can mix; retry
        // with the whole near-zero cluster handled by the null-space path
        TakagiDecomposition relaxed = build(sym, 1e-6);
        if (relaxed.reconstruction_residual < dec.reconstruction_residual)
            dec = std::move(relaxed);
    }
    return dec;
}

SqueezingSpectrum squeezing_params(const TakagiDecomposition& dec) {
    SqueezingSpectrum out;
    out.mu = 2.0 * dec.d;
    if ((out.mu.array() >= 1.0).any())
        throw std::invalid_argument("squeezing constants require all Takagi values < 1/2");
    out.r = out.mu.array().atanh();
    return out;
}

}  // namespace herald
