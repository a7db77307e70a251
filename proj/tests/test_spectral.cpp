#include <doctest.h>

#include <algorithm>
#include <random>

#include "nmrelax/spectral.hpp"

using namespace nmrelax;

namespace {

// Matches each expected eigenvalue against the closest computed one.
void check_eigenvalue_set(const std::array<Complex, 3>& got,
                          const std::array<Complex, 3>& expected, double tol) {
    for (const Complex& e : expected) {
        double best = 1e300;
        for (const Complex& g : got) best = std::min(best, std::abs(g - e));
        CHECK(best <= tol);
    }
}

double log_uniform(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

}  // namespace

TEST_CASE("omega1 = 0: spectrum from the decoupled 2x2 block") {
    // The b_y row decouples; remaining block gives lambda^2 + 2g lambda + J^2.
    const double g = 0.20, J = two_pi * 6.6;
    const ModelParams p{0.41, g, J, 0.0, 1};
    const SpectralData sd = cubic_spectrum(p);
    const double osc = std::sqrt(J * J - g * g);
    check_eigenvalue_set(sd.lambda,
                         {Complex{-g, 0.0}, Complex{-g, osc}, Complex{-g, -osc}},
                         1e-10 * J);
}

TEST_CASE("gamma_II = 0, omega1 = 0: purely oscillatory spectrum") {
    const double J = two_pi * 6.6;
    const SpectralData sd = cubic_spectrum(ModelParams{0.0, 0.0, J, 0.0, 1});
    CHECK(sd.method == SpectralData::Method::numeric_fallback);
    check_eigenvalue_set(sd.lambda, {Complex{0.0}, Complex{0.0, J}, Complex{0.0, -J}},
                         1e-10 * J);
}

TEST_CASE("closed form matches companion-matrix roots at the TMS drive point") {
    const ModelParams p{0.41, 0.20, two_pi * 6.6, two_pi * 21.0, 1};
    const SpectralData sd = cubic_spectrum(p);
    REQUIRE(sd.method == SpectralData::Method::closed_form);
    const auto roots = companion_roots(p.gamma_II, p.J, p.omega1);
    check_eigenvalue_set(sd.lambda, roots, 1e-10 * p.omega1);
}

TEST_CASE("spectral identities over random parameter sets") {
    std::mt19937 rng(4711);
    for (int trial = 0; trial < 200; ++trial) {
        const double g = log_uniform(rng, 1e-2, 1e3);
        const double J = log_uniform(rng, 1e-2, 1e3);
        const double w = log_uniform(rng, 1e-2, 1e3);
        const SpectralData sd = cubic_spectrum_raw(g, J, w);
        const double scale = std::max({g, J, w});

        const Complex sum = sd.lambda[0] + sd.lambda[1] + sd.lambda[2];
        const Complex prod = sd.lambda[0] * sd.lambda[1] * sd.lambda[2];
        CHECK(std::abs(sum - Complex{-3.0 * g}) <= 1e-10 * 3.0 * std::max(g, scale));
        CHECK(std::abs(prod - Complex{-J * J * g}) <= 1e-10 * std::abs(J * J * g) +
                                                          1e-10 * scale);

        const Eigen::Matrix3cd m = reduced_generator(g, J, w);
        const double m_norm = m.norm();
        for (int i = 0; i < 3; ++i) {
            const Eigen::Vector3cd v = sd.eigenvector(i);
            const double residual =
                (m * v - sd.lambda[static_cast<std::size_t>(i)] * v).norm() /
                v.norm();
            CHECK(residual <= 1e-10 * m_norm);
        }

        if (sd.method == SpectralData::Method::closed_form) {
            CHECK(sd.lambda[2] == std::conj(sd.lambda[1]));
            CHECK(sd.u[2] == std::conj(sd.u[1]));
            check_eigenvalue_set(sd.lambda, companion_roots(g, J, w), 1e-9 * scale);
        }
    }
}

TEST_CASE("coefficients satisfy V u = e1") {
    std::mt19937 rng(2026);
    for (int trial = 0; trial < 50; ++trial) {
        const double g = log_uniform(rng, 1e-2, 1e2);
        const double J = log_uniform(rng, 1e-2, 1e2);
        const double w = log_uniform(rng, 1e-2, 1e2);
        const SpectralData sd = cubic_spectrum_raw(g, J, w);
        if (sd.degenerate) continue;
        Eigen::Vector3cd rhs = Eigen::Vector3cd::Zero();
        for (int i = 0; i < 3; ++i) {
            rhs += sd.u[static_cast<std::size_t>(i)] * sd.eigenvector(i);
        }
        CHECK(std::abs(rhs(0) - Complex{1.0}) <= 1e-9);
        CHECK(std::abs(rhs(1)) <= 1e-9);
        CHECK(std::abs(rhs(2)) <= 1e-9);
    }
}

TEST_CASE("gamma_II = 0 routes to the fallback") {
    const SpectralData sd = cubic_spectrum_raw(0.0, 10.0, 3.0);
    CHECK(sd.method == SpectralData::Method::numeric_fallback);
    CHECK_FALSE(sd.degenerate);
}

TEST_CASE("fully degenerate spectrum is flagged, not an error") {
    const SpectralData sd = cubic_spectrum_raw(0.0, 0.0, 0.0);
    CHECK(sd.degenerate);
}

TEST_CASE("expm3 against hand-computable cases") {
    CHECK((expm3(Eigen::Matrix3cd::Zero()) - Eigen::Matrix3cd::Identity()).norm() ==
          doctest::Approx(0.0).epsilon(1e-15));

    Eigen::Matrix3cd diag = Eigen::Matrix3cd::Zero();
    diag(0, 0) = Complex{1.0, 2.0};
    diag(1, 1) = Complex{-3.0, 0.5};
    diag(2, 2) = Complex{0.0, -7.0};
    const Eigen::Matrix3cd e = expm3(diag);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(e(i, i) - std::exp(diag(i, i))) <= 1e-13 * std::abs(std::exp(diag(i, i))));
    }

    // Nilpotent: exp(N) = I + N + N^2/2 exactly.
    Eigen::Matrix3cd nil = Eigen::Matrix3cd::Zero();
    nil(0, 1) = 2.0;
    nil(1, 2) = -3.0;
    const Eigen::Matrix3cd expected =
        Eigen::Matrix3cd::Identity() + nil + 0.5 * nil * nil;
    CHECK((expm3(nil) - expected).norm() <= 1e-13);
}
