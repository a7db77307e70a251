#include "nmrelax/measure.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace nmrelax {

double trace_distance(const DensityMatrix2& a, const DensityMatrix2& b) {
    const Eigen::Matrix2cd diff = a.m - b.m;
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(diff);
    return 0.5 * svd.singularValues().sum();
}

namespace {

struct Run {
    std::size_t first;  // sample index of the interval start
    std::size_t last;   // sample index of the interval end (> first)
};

std::vector<Run> rising_runs(const std::vector<double>& v) {
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i + 1 < v.size()) {
        if (v[i + 1] >= v[i]) {
            std::size_t j = i + 1;
            while (j + 1 < v.size() && v[j + 1] >= v[j]) ++j;
            runs.push_back({i, j});
            i = j;
        } else {
            ++i;
        }
    }
    return runs;
}

std::vector<double> abs_values(const Trajectory& traj) {
    std::vector<double> v(traj.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(traj.values[i]);
    return v;
}

// Bisection for a zero of `deriv` bracketed by a sign change in [a, b].
double bisect_zero(const std::function<double(double)>& deriv, double a,
                   double b, double tol) {
    double fa = deriv(a);
    double fb = deriv(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0)) return b;  // no bracket; keep grid point
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = deriv(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Refines an extremum located near sample `idx` by bisecting the derivative
// within the two adjacent grid cells.
double refine_boundary(const Trajectory& traj, std::size_t idx,
                       double refine_tol,
                       const std::function<double(double)>& deriv) {
    const auto& t = traj.times;
    const double here = deriv(t[idx]);
    if (idx > 0) {
        const double left = deriv(t[idx - 1]);
        if ((left < 0.0) != (here < 0.0)) {
            return bisect_zero(deriv, t[idx - 1], t[idx], refine_tol);
        }
    }
    if (idx + 1 < t.size()) {
        const double right = deriv(t[idx + 1]);
        if ((here < 0.0) != (right < 0.0)) {
            return bisect_zero(deriv, t[idx], t[idx + 1], refine_tol);
        }
    }
    return t[idx];
}

OmegaPlus detect(const Trajectory& abs_traj, double refine_tol,
                 const std::function<double(double)>* deriv) {
    if (abs_traj.size() < 3) {
        throw std::invalid_argument("omega_plus: need at least 3 samples");
    }
    const auto v = abs_values(abs_traj);
    OmegaPlus out;
    for (const Run& run : rising_runs(v)) {
        double a = abs_traj.times[run.first];
        double b = abs_traj.times[run.last];
        if (deriv) {
            if (run.first > 0) a = refine_boundary(abs_traj, run.first, refine_tol, *deriv);
            if (run.last + 1 < v.size()) {
                b = refine_boundary(abs_traj, run.last, refine_tol, *deriv);
            }
        }
        if (b > a) out.intervals.push_back({a, b});
    }
    return out;
}

}  // namespace

OmegaPlus omega_plus_intervals(const Trajectory& abs_traj, double refine_tol) {
    return detect(abs_traj, refine_tol, nullptr);
}

OmegaPlus omega_plus_intervals(const Trajectory& abs_traj, double refine_tol,
                               const std::function<double(double)>& deriv) {
    return detect(abs_traj, refine_tol, &deriv);
}

MeasureResult blp_measure(const Trajectory& traj,
                          std::pair<double, double> window) {
    if (traj.size() < 3) {
        throw std::invalid_argument("blp_measure: need at least 3 samples");
    }
    const auto [w0, w1] = window;
    if (!(w1 > w0)) throw std::invalid_argument("blp_measure: empty window");
    if (w0 < traj.times.front() - 1e-12 || w1 > traj.times.back() + 1e-12) {
        throw std::invalid_argument("blp_measure: window outside trajectory support");
    }

    // Restrict to the window, linearly interpolating |beta| at its edges.
    const auto v = abs_values(traj);
    std::vector<double> t_in, v_in;
    auto interp_at = [&](double t) {
        const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
        const std::size_t hi = std::min<std::size_t>(
            traj.size() - 1,
            static_cast<std::size_t>(std::distance(traj.times.begin(), it)));
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        if (hi == lo) return v[lo];
        const double f = (t - traj.times[lo]) / (traj.times[hi] - traj.times[lo]);
        return v[lo] + f * (v[hi] - v[lo]);
    };
    t_in.push_back(w0);
    v_in.push_back(interp_at(w0));
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] > t_in.back() && traj.times[i] < w1) {
            t_in.push_back(traj.times[i]);
            v_in.push_back(v[i]);
        }
    }
    if (w1 > t_in.back()) {
        t_in.push_back(w1);
        v_in.push_back(interp_at(w1));
    }
    if (t_in.size() < 3) {
        throw std::invalid_argument("blp_measure: too few samples inside window");
    }

    MeasureResult res;
    res.window = window;
    res.grid_samples = static_cast<int>(t_in.size());
    for (const Run& run : rising_runs(v_in)) {
        res.N += v_in[run.last] - v_in[run.first];
        res.omega_plus.intervals.push_back({t_in[run.first], t_in[run.last]});
    }
    return res;
}

MeasureResult blp_measure_analytic(const ModelParams& p,
                                   std::pair<double, double> window,
                                   int samples) {
    validate_params(p);
    const auto [w0, w1] = window;
    if (!(w1 > w0)) throw std::invalid_argument("blp_measure_analytic: empty window");

    const TimeGrid grid(w0, w1, samples);
    const SpectralData sd = cubic_spectrum(p);
    const auto times = grid.times();
    std::vector<Complex> values(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        values[i] = beta_n(p, sd, times[i]);
    }
    const Trajectory traj(times, std::move(values), "beta_n");

    const std::function<double(double)> deriv = [&](double t) {
        return beta_abs_deriv(p, sd, t);
    };
    const double refine_tol = grid.dt() * 1e-8;
    const OmegaPlus omega = omega_plus_intervals(traj, refine_tol, deriv);

    MeasureResult res;
    res.window = window;
    res.grid_samples = samples;
    res.omega_plus = omega;
    for (const auto& [a, b] : omega.intervals) {
        res.N += std::abs(beta_n(p, sd, b)) - std::abs(beta_n(p, sd, a));
    }
    return res;
}

Trajectory moving_average(const Trajectory& traj, double window_len) {
    if (window_len <= 0.0) {
        throw std::invalid_argument("moving_average: window_len must be > 0");
    }
    if (traj.size() < 2) return traj;
    const double dt = traj.times[1] - traj.times[0];
    const long w = std::lround(window_len / dt);
    if (w < 2) {
        std::cerr << "moving_average: window " << window_len
                  << " s is below the grid spacing; returning input unchanged\n";
        return traj;
    }
    const long h = w / 2;
    const long size = static_cast<long>(traj.size());
    std::vector<Complex> prefix(traj.size() + 1, Complex{0.0});
    for (long i = 0; i < size; ++i) {
        prefix[static_cast<std::size_t>(i) + 1] =
            prefix[static_cast<std::size_t>(i)] + traj.values[static_cast<std::size_t>(i)];
    }
    std::vector<Complex> out(traj.size());
    for (long i = 0; i < size; ++i) {
        const long lo = std::max(0L, i - h);
        const long hi = std::min(size - 1, i + h);
        out[static_cast<std::size_t>(i)] =
            (prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)]) /
            static_cast<double>(hi - lo + 1);
    }
    return Trajectory(traj.times, std::move(out), traj.label);
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int points) {
    if (points < 1) throw std::invalid_argument("gauss_hermite: points must be >= 1");
    if (points == 1) return {{0.0}, {1.0}};
    // Golub-Welsch on the Hermite Jacobi matrix; normalised weights.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(points, points);
    for (int k = 1; k < points; ++k) {
        const double off = std::sqrt(0.5 * k);
        jac(k - 1, k) = off;
        jac(k, k - 1) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    std::vector<double> nodes(static_cast<std::size_t>(points));
    std::vector<double> weights(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double q0 = es.eigenvectors()(0, i);
        weights[static_cast<std::size_t>(i)] = q0 * q0;
    }
    return {nodes, weights};
}

Trajectory ensemble_beta(const ModelParams& p, const TimeGrid& grid,
                         double spread, int quad_points) {
    validate_params(p);
    if (spread < 0.0) throw std::invalid_argument("ensemble_beta: spread must be >= 0");
    if (quad_points < 1) {
        throw std::invalid_argument("ensemble_beta: quad_points must be >= 1");
    }
    if (spread == 0.0 || p.omega1 == 0.0 || quad_points == 1) {
        return beta_trajectory(p, grid);
    }

    const auto [nodes, weights] = gauss_hermite(quad_points);
    const auto times = grid.times();
    std::vector<Complex> acc(times.size(), Complex{0.0});
    const double sigma = spread * p.omega1;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double omega1_q = p.omega1 + std::sqrt(2.0) * sigma * nodes[q];
        const SpectralData sd = cubic_spectrum_raw(p.gamma_II, p.J, omega1_q);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const Complex b = p.J == 0.0 ? Complex{1.0} : b0(sd, times[i]);
            acc[i] += weights[q] * std::exp(-0.5 * p.gamma_I * times[i]) *
                      std::pow(b, p.n);
        }
    }
    return Trajectory(times, std::move(acc), "beta_n_ensemble");
}

}  // namespace nmrelax
