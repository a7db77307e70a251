// spectral.hpp — Spectral decomposition of the 3x3 reduced generator

#pragma once

#include <array>

#include <Eigen/Dense>

#include "nmrelax/model.hpp"

namespace nmrelax {

/// Eigen-decomposition of the rescaled reduced generator M' = 2*M^T acting
/// on the coherence coefficients (b0, b_y, b_z). The solution of the
/// reduced ODE is b(t) = sum_i u_i v_i exp(lambda_i t / 2).
struct SpectralData {
    enum class Method { closed_form, numeric_fallback };

    std::array<Complex, 3> lambda{};  // eigenvalues of M', 1/s
    std::array<Complex, 3> u{};       // expansion coefficients for b(0) = e1
    Eigen::Matrix3cd V;               // eigenvectors as columns, V.col(i) <-> lambda[i]
    Complex C{};                      // Cardano auxiliary (real in the closed-form regime)
    double D{0.0};                    // J^2 - gamma_II^2 + 4 omega1^2
    Method method{Method::numeric_fallback};
    bool degenerate{false};   // eigenvalues coincide within eps; use expm path
    Eigen::Matrix3cd m_half;  // M'/2, kept for the expm path and derivatives

    Eigen::Vector3cd eigenvector(int i) const { return V.col(i); }
};

/// The 3x3 matrix M' = 2*M^T whose eigenvalues govern b0(t).
/// omega1 may be negative here (the spectrum is even in omega1); this is
/// used by the inhomogeneity quadrature.
Eigen::Matrix3cd reduced_generator(double gamma_II, double J, double omega1);
Eigen::Matrix3cd reduced_generator(const ModelParams& p);

/// Roots of the characteristic cubic of M' via the companion matrix.
/// Independent of the closed-form route; used as its cross-check and as
/// the fallback.
std::array<Complex, 3> companion_roots(double gamma_II, double J, double omega1);

/// Spectral decomposition of M'. Uses the closed-form Cardano/eigenvector
/// expressions where they are well conditioned, otherwise falls back to
/// companion-matrix roots with the coefficients obtained from the 3x3
/// linear system V u = e1. Coincident eigenvalues set `degenerate` and
/// route evaluation through the matrix exponential.
SpectralData cubic_spectrum(const ModelParams& p);

/// Internal entry point that skips ModelParams validation so omega1 < 0 is
/// allowed (the spectrum and b0 are even in omega1).
SpectralData cubic_spectrum_raw(double gamma_II, double J, double omega1);

/// exp(A) for a 3x3 complex matrix by scaling and squaring with a Pade
/// approximant; only used on the degenerate-spectrum path.
Eigen::Matrix3cd expm3(const Eigen::Matrix3cd& a);

}  // namespace nmrelax
