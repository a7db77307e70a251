// measure.hpp — Trace distance, backflow intervals, and the BLP measure

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nmrelax/model.hpp"
#include "nmrelax/propagator.hpp"

namespace nmrelax {

/// Times where the trace distance between the evolving antipodal pair is
/// non-decreasing: a sorted list of disjoint intervals.
struct OmegaPlus {
    std::vector<std::pair<double, double>> intervals;
};

struct MeasureResult {
    double N{0.0};
    OmegaPlus omega_plus;
    std::pair<double, double> window{0.0, 0.0};
    int grid_samples{0};
};

/// D(a, b) = (1/2) * sum of singular values of a - b.
double trace_distance(const DensityMatrix2& a, const DensityMatrix2& b);

/// Maximal non-decreasing intervals of a real-valued |beta| trajectory.
/// Boundaries sit at grid resolution; the overload with `deriv` refines
/// them by bisection on d|beta|/dt down to refine_tol seconds.
OmegaPlus omega_plus_intervals(const Trajectory& abs_traj, double refine_tol);
OmegaPlus omega_plus_intervals(const Trajectory& abs_traj, double refine_tol,
                               const std::function<double(double)>& deriv);

/// BLP measure over the window: the summed increase of |beta| across its
/// non-decreasing segments (exact telescoping, no quadrature).
MeasureResult blp_measure(const Trajectory& traj,
                          std::pair<double, double> window);

/// Same measure evaluated from the analytic propagator on `samples` grid
/// points, with interval boundaries refined via the spectral derivative.
MeasureResult blp_measure_analytic(const ModelParams& p,
                                   std::pair<double, double> window,
                                   int samples);

/// Centered uniform moving average; endpoint windows are truncated. A
/// window shorter than the grid spacing returns the input unchanged (with
/// a warning on stderr).
Trajectory moving_average(const Trajectory& traj, double window_len);

/// beta_n averaged over a Gaussian spread of the drive amplitude,
/// omega1' ~ Normal(omega1, spread * omega1), by Gauss-Hermite quadrature.
/// spread = 0 or omega1 = 0 reduces to beta_n exactly.
Trajectory ensemble_beta(const ModelParams& p, const TimeGrid& grid,
                         double spread, int quad_points);

/// Gauss-Hermite nodes and weights (weights normalised to sum to 1, so a
/// weighted sum is an expectation under the standard normal after the
/// x -> sqrt(2) x substitution).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int points);

}  // namespace nmrelax
