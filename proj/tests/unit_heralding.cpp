#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "herald/heralding.hpp"
#include "herald/polynomial.hpp"
#include "support.hpp"

using namespace herald;
using Cd = std::complex<double>;

TEST_CASE("log_pn hand-checked values") {
    // n = 0 heralds the vacuum: P_0 = |Z|^2
    const CoreParams p0(0.4, 1.3, Cd(0.2, 0.1));
    CHECK(log_pn(p0, 0).log() == doctest::Approx(z_squared(p0).log()).epsilon(1e-14));

    // Fock target (s0 = 0): P_1 = lambda^2 (1 - lambda^2) peaks at 1/4
    const CoreParams p1(std::sqrt(0.5), 0.0, 0.0);
    CHECK(log_pn(p1, 1).linear() == doctest::Approx(0.25).epsilon(1e-13));

    // squeezed-Fock target at s0 = 1, lambda^2 = 2/5, n = 2:
    // P_2 = (lambda^4 / 2) sqrt((1-lambda^2)^2 - lambda^4) * 3
    const double l2 = 0.4;
    const CoreParams p2(std::sqrt(l2), 1.0, 0.0);
    const double expected =
        0.5 * l2 * l2 * std::sqrt((1.0 - l2) * (1.0 - l2) - l2 * l2) * 3.0;
    CHECK(log_pn(p2, 2).linear() == doctest::Approx(expected).epsilon(1e-13));

    CHECK_THROWS_AS(log_pn(p2, -1), std::invalid_argument);
}

TEST_CASE("norm dispatch routes agree on common ground") {
    // parity route vs recurrence at delta0 = 0, Laguerre route vs recurrence
    // at s0 = 0, all through the same entry point
    for (int n : {1, 3, 8, 21}) {
        CHECK(log_psi_norm_sq(n, 0.7, 0.0) ==
              doctest::Approx(psi_coefficients(n, 0.7, 0.0).log_norm_sq).epsilon(1e-11));
        CHECK(log_psi_norm_sq(n, 0.0, Cd(0.6, -1.1)) ==
              doctest::Approx(psi_coefficients(n, 0.0, Cd(0.6, -1.1)).log_norm_sq)
                  .epsilon(1e-11));
    }
}

TEST_CASE("parity optimum closed form is exact at s0 = 0 and s0 = 1") {
    for (int n = 1; n <= 50; ++n) {
        const OptResult fock = optimize_parity(n, 0.0);
        CHECK(fock.lambda_sq_opt ==
              doctest::Approx(n / (n + 1.0)).epsilon(1e-14));
        CHECK(fock.method == OptMethod::closed_form_parity);
        // P_n = n^n / (n+1)^{n+1} for Fock targets
        const double expected =
            n * std::log(static_cast<double>(n)) - (n + 1.0) * std::log(n + 1.0);
        CHECK(fock.log_pn == doctest::Approx(expected).epsilon(1e-12));

        const OptResult sq = optimize_parity(n, 1.0);
        CHECK(sq.lambda_sq_opt == doctest::Approx(n / (2.0 * n + 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("parity optimum matches the explicit quadratic root for s0 != 1") {
    // same root, written with the (1 - s0^2) denominator
    for (double s0 : {0.3, 0.9, 1.5, 1.999}) {
        for (int n : {1, 2, 7, 19, 50}) {
            const double d = std::sqrt(1.0 + 4.0 * n * (n + 1.0) * s0 * s0);
            const double textbook =
                (1.0 + 2.0 * n - d) / (2.0 * (n + 1.0) * (1.0 - s0 * s0));
            CHECK(optimize_parity(n, s0).lambda_sq_opt ==
                  doctest::Approx(textbook).epsilon(1e-12));
        }
    }
}

TEST_CASE("parity optimum is continuous through s0 = 1") {
    for (int n : {1, 5, 12}) {
        const double at = optimize_parity(n, 1.0).lambda_sq_opt;
        CHECK(optimize_parity(n, 1.0 - 1e-9).lambda_sq_opt == doctest::Approx(at).epsilon(1e-7));
        CHECK(optimize_parity(n, 1.0 + 1e-9).lambda_sq_opt == doctest::Approx(at).epsilon(1e-7));
    }
}

TEST_CASE("parity optimum dominates a dense scan") {
    const int n = 3;
    const double s0 = 0.5;
    const OptResult best = optimize_parity(n, s0);
    const double log_norm = log_psi_norm_sq(n, s0, 0.0);
    const double hi = 1.0 / (1.0 + s0);
    for (int k = 1; k < 10000; ++k) {
        const double x = hi * k / 10000.0 * (1.0 - 1e-9);
        const CoreParams p(std::sqrt(x), s0, 0.0);
        const double val =
            n * std::log(x) - log_factorial(n) + z_squared(p).log() + log_norm;
        CHECK(val <= best.log_pn + 1e-9);
    }
}

TEST_CASE("photon-added optimum") {
    SUBCASE("reduces to the Fock case at alpha = 0") {
        for (int n : {1, 4, 9}) {
            const OptResult added = optimize_added(n, 0.0);
            const OptResult fock = optimize_parity(n, 0.0);
            CHECK(added.lambda_sq_opt == doctest::Approx(fock.lambda_sq_opt).epsilon(1e-14));
            CHECK(added.log_pn == doctest::Approx(fock.log_pn).epsilon(1e-13));
        }
    }
    SUBCASE("n = 1, |alpha| = 1 in closed form") {
        // lambda^2 = 2 / (4 + 2 sqrt(2)) = 1 - sqrt(2)/2
        const OptResult r = optimize_added(1, 1.0);
        CHECK(r.lambda_sq_opt ==
              doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-14));
        CHECK(r.method == OptMethod::closed_form_added);
    }
    SUBCASE("depends only on |delta0|") {
        const OptResult mag = optimize_added(4, 2.0);
        for (Cd delta0 : {Cd(0.0, 2.0), Cd(-2.0, 0.0),
                          Cd(2.0 * std::cos(1.1), 2.0 * std::sin(1.1))}) {
            const OptResult gen = optimize_general(4, 0.0, delta0);
            CHECK(gen.lambda_sq_opt == doctest::Approx(mag.lambda_sq_opt).epsilon(1e-10));
            CHECK(gen.log_pn == doctest::Approx(mag.log_pn).epsilon(1e-10));
        }
    }
    SUBCASE("agrees with the quartic solver") {
        const OptResult closed = optimize_added(10, 2.0);
        const OptResult quartic = optimize_general(10, 0.0, Cd(2.0, 0.0));
        CHECK(quartic.method == OptMethod::polynomial_general);
        CHECK(quartic.lambda_sq_opt == doctest::Approx(closed.lambda_sq_opt).epsilon(1e-10));
        CHECK(quartic.log_pn == doctest::Approx(closed.log_pn).epsilon(1e-10));
    }
}

TEST_CASE("quartic solver specializes to the parity closed form") {
    for (double s0 : {0.4, 1.0, 1.6}) {
        for (int n : {1, 3, 10}) {
            const OptResult gen = optimize_general(n, s0, 0.0);
            const OptResult par = optimize_parity(n, s0);
            CHECK(gen.lambda_sq_opt == doctest::Approx(par.lambda_sq_opt).epsilon(1e-10));
            CHECK(gen.log_pn == doctest::Approx(par.log_pn).epsilon(1e-10));
        }
    }
}

TEST_CASE("quartic degenerates gracefully at s0 = 1 with real delta0") {
    // leading coefficient vanishes at s0 = 1, and the cubic one vanishes
    // too when delta0 is real: the true degree is 2
    const auto c = extremality_coefficients(4, 1.0, Cd(1.0, 0.0));
    CHECK(c[4] == 0.0);
    CHECK(c[3] == 0.0);
    CHECK(c[0] == 4.0);

    const OptResult r = optimize_general(4, 1.0, Cd(1.0, 0.0));
    CHECK(r.method == OptMethod::polynomial_general);
    CHECK(r.lambda_sq_opt == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // complex delta0 restores the cubic term
    const auto c2 = extremality_coefficients(4, 1.0, Cd(0.0, 1.0));
    CHECK(c2[4] == 0.0);
    CHECK(c2[3] != 0.0);
}

TEST_CASE("general optimum beats a fine scan at s0 = 1, delta0 = 1, n = 4") {
    const int n = 4;
    const double s0 = 1.0;
    const Cd delta0(1.0, 0.0);
    const OptResult best = optimize_general(n, s0, delta0);
    const double log_norm = log_psi_norm_sq(n, s0, delta0);
    const double hi = 1.0 / (1.0 + s0);

    double scan_best = -1e300, scan_x = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double x = hi * k / 100000.0 * (1.0 - 1e-9);
        const CoreParams p(std::sqrt(x), s0, delta0);
        const double val =
            n * std::log(x) - log_factorial(n) + z_squared(p).log() + log_norm;
        if (val > scan_best) {
            scan_best = val;
            scan_x = x;
        }
    }
    CHECK(best.log_pn >= scan_best - 1e-12);
    CHECK(best.log_pn == doctest::Approx(scan_best).epsilon(1e-9));
    CHECK(best.lambda_sq_opt == doctest::Approx(scan_x).epsilon(2e-5));

    // infeasible roots are reported but never scored
    bool saw_infeasible = false;
    for (const auto& root : best.candidate_roots)
        if (!root.feasible) {
            saw_infeasible = true;
            CHECK(std::isnan(root.log_pn));
        }
    CHECK(saw_infeasible);
}

TEST_CASE("returned optimum is a stationary point of ln P_n") {
    std::mt19937 rng(8088);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(unif(rng) * 29.0);
        const double s0 = 2.0 * unif(rng);
        const Cd delta0 = test_support::random_complex(rng, 2.0);
        const OptResult r = optimize_general(n, s0, delta0);
        const double log_norm = log_psi_norm_sq(n, s0, delta0);
        const auto at = [&](double x) {
            const CoreParams p(std::sqrt(x), s0, delta0);
            return n * std::log(x) - log_factorial(n) + z_squared(p).log() + log_norm;
        };
        const double h = 1e-6;
        const double fd = (at(r.lambda_sq_opt + h) - at(r.lambda_sq_opt - h)) / (2.0 * h);
        CHECK(std::abs(fd) <= 1e-4);
    }
}

TEST_CASE("quartic residual vanishes at polynomial optima") {
    std::mt19937 rng(515);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(unif(rng) * 19.0);
        const double s0 = 0.1 + 1.8 * unif(rng);
        const Cd delta0 = test_support::random_complex(rng, 1.5);
        const OptResult r = optimize_general(n, s0, delta0);
        if (r.method != OptMethod::polynomial_general) continue;
        const auto c = extremality_coefficients(n, s0, delta0);
        double scale = 0.0;
        for (double ck : c) scale = std::max(scale, std::abs(ck));
        CHECK(std::abs(polynomial_eval(c, r.lambda_sq_opt)) <= 1e-8 * scale);
    }
}

TEST_CASE("optimal lambda^2 approaches the feasibility edge like 1 - 1/(2n)") {
    const int n = 1000;
    for (double s0 : {0.5, 1.0, 2.0}) {
        const double x = optimize_parity(n, s0).lambda_sq_opt;
        CHECK(std::abs(x - (1.0 - 0.5 / n) / (1.0 + s0)) <= 5.0 / (n * static_cast<double>(n)));
    }
}

TEST_CASE("n = 0 is the boundary supremum") {
    for (const OptResult& r :
         {optimize_parity(0, 0.7), optimize_added(0, 1.2), optimize_general(0, 0.7, Cd(0.3, 0.1))}) {
        CHECK(r.method == OptMethod::boundary_vacuum);
        CHECK(r.lambda_sq_opt == 0.0);
        CHECK(r.log_pn == 0.0);
    }
}

TEST_CASE("asymptotic forms match the optimized probabilities") {
    SUBCASE("squeezed targets, s0 = 1") {
        const double exact = optimize_parity(1000, 1.0).log_pn;
        const double asym = asymptotic_pn(AsymptoticRegime::parity_s1, 1000).log();
        CHECK(std::abs(std::exp(exact - asym) - 1.0) <= 0.02);
    }
    SUBCASE("Fock targets, s0 = 0") {
        const double exact = optimize_parity(2000, 0.0).log_pn;
        const double asym = asymptotic_pn(AsymptoticRegime::fock_s0, 2000).log();
        CHECK(std::abs(std::exp(exact - asym) - 1.0) <= 0.001);
    }
    SUBCASE("photon-added targets") {
        const double exact = optimize_added(100000, 2.0).log_pn;
        const double asym = asymptotic_pn(AsymptoticRegime::added, 100000, 2.0).log();
        CHECK(std::abs(std::exp(exact - asym) - 1.0) <= 0.02);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(asymptotic_pn(AsymptoticRegime::parity_s1, 10, 0.5),
                        std::invalid_argument);
        CHECK_THROWS_AS(asymptotic_pn(AsymptoticRegime::fock_s0, 10, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(asymptotic_pn(AsymptoticRegime::added, 10, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(asymptotic_pn(AsymptoticRegime::parity_s1, 0),
                        std::invalid_argument);
    }
}

TEST_CASE("power-law fit recovers a synthetic decay exactly") {
    std::vector<std::pair<long, double>> pts;
    for (long n : {10L, 30L, 100L, 400L, 2000L, 9000L})
        pts.emplace_back(n, std::log(3.0) - 1.0 * std::log(static_cast<double>(n)));
    const ScalingFit fit = fit_gamma(pts);
    CHECK(fit.gamma == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.residual <= 1e-12);
    CHECK(fit.n_min == 10);
    CHECK(fit.n_max == 9000);

    pts.resize(4);
    CHECK_THROWS_AS(fit_gamma(pts), std::invalid_argument);
    std::vector<std::pair<long, double>> bad = {
        {10, 0.0}, {20, 0.0}, {20, 0.0}, {40, 0.0}, {80, 0.0}};
    CHECK_THROWS_AS(fit_gamma(bad), std::invalid_argument);
}

TEST_CASE("auto dispatch picks the cheapest applicable method") {
    CHECK(optimize_auto(3, 0.8, 0.0).method == OptMethod::closed_form_parity);
    CHECK(optimize_auto(3, 0.0, Cd(1.0, 1.0)).method == OptMethod::closed_form_added);
    CHECK(optimize_auto(3, 0.8, Cd(1.0, 1.0)).method == OptMethod::polynomial_general);
    CHECK_THROWS_AS(optimize_auto(-1, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(optimize_parity(2, -0.1), std::invalid_argument);
}
