// propagator.hpp — Closed-form reduced dynamics: b0(t), beta_n(t), rho_I(t)

#pragma once

#include <Eigen/Dense>

#include "nmrelax/model.hpp"
#include "nmrelax/spectral.hpp"

namespace nmrelax {

/// 2x2 reduced state of the central qubit.
struct DensityMatrix2 {
    Eigen::Matrix2cd m;

    double trace_defect() const { return std::abs(m.trace() - Complex{1.0}); }
    double hermiticity_defect() const {
        return (m - m.adjoint()).cwiseAbs().maxCoeff();
    }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(
            0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

/// Coherence coefficient b0(t) of a single satellite. Identically 1 when
/// J = 0 (the central qubit decouples).
Complex b0(const ModelParams& p, double t);
Complex b0(const SpectralData& sd, double t);

/// d b0 / dt, from the spectral form (or M'/2 times b on the expm path).
Complex b0_deriv(const SpectralData& sd, double t);

/// Full coefficient vector (b0, b_y, b_z)(t) = sum_i u_i v_i exp(lambda_i t/2).
Eigen::Vector3cd bvec(const ModelParams& p, double t);
Eigen::Vector3cd bvec(const SpectralData& sd, double t);

/// beta_n(t) = exp(-gamma_I t / 2) * b0(t)^n.
Complex beta_n(const ModelParams& p, double t);
Complex beta_n(const ModelParams& p, const SpectralData& sd, double t);

/// d|beta_n|/dt; used to refine backflow-interval boundaries.
double beta_abs_deriv(const ModelParams& p, const SpectralData& sd, double t);

/// Reduced central-qubit state with equatorial phase theta:
///   1/2 [[1, e^{i theta} beta_n], [e^{-i theta} beta_n*, 1]].
DensityMatrix2 rho_I(const ModelParams& p, double theta, double t);

/// beta_n sampled on a grid, reusing one spectral decomposition.
Trajectory beta_trajectory(const ModelParams& p, const TimeGrid& grid);

}  // namespace nmrelax
