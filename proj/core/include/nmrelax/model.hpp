// model.hpp — Physical parameters, time grids, and sampled-signal containers

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmrelax {

using Complex = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Rates and couplings of the star model: a central qubit relaxing at
/// gamma_I, coupled with strength J to n satellite qubits that relax at
/// gamma_II and are driven with amplitude omega1. All angular frequencies
/// are in rad/s.
struct ModelParams {
    double gamma_I{0.0};
    double gamma_II{0.0};
    double J{0.0};
    double omega1{0.0};
    int n{1};
};

/// Largest satellite count the brute-force integrator accepts
/// (2^13-dimensional state). The analytic path has no such cap.
inline constexpr int max_oracle_satellites = 12;

/// Checks all ModelParams invariants, returning the params unchanged.
/// Throws std::invalid_argument naming the offending field.
inline const ModelParams& validate_params(const ModelParams& p) {
    auto check_finite = [](double v, const char* name) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(name) + " must be finite");
        }
    };
    check_finite(p.gamma_I, "gamma_I");
    check_finite(p.gamma_II, "gamma_II");
    check_finite(p.J, "J");
    check_finite(p.omega1, "omega1");
    if (p.gamma_I < 0.0) throw std::invalid_argument("gamma_I must be >= 0");
    if (p.gamma_II < 0.0) throw std::invalid_argument("gamma_II must be >= 0");
    if (p.omega1 < 0.0) throw std::invalid_argument("omega1 must be >= 0");
    if (p.n < 1) throw std::invalid_argument("n must be >= 1");
    return p;
}

/// Uniform time grid on [t_start, t_end] with `samples` points inclusive.
struct TimeGrid {
    double t_start{0.0};
    double t_end{1.0};
    int samples{2};

    TimeGrid() = default;
    TimeGrid(double start, double end, int count)
        : t_start(start), t_end(end), samples(count) {
        if (!std::isfinite(start) || !std::isfinite(end)) {
            throw std::invalid_argument("time grid bounds must be finite");
        }
        if (start < 0.0) throw std::invalid_argument("t_start must be >= 0");
        if (end <= start) throw std::invalid_argument("t_end must be > t_start");
        if (count < 2) throw std::invalid_argument("samples must be >= 2");
    }

    double dt() const { return (t_end - t_start) / (samples - 1); }
    double at(int i) const { return t_start + i * dt(); }

    std::vector<double> times() const {
        std::vector<double> out(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i) out[static_cast<std::size_t>(i)] = at(i);
        out.back() = t_end;  // exact endpoint regardless of rounding
        return out;
    }
};

/// A sampled complex signal on a strictly increasing time axis.
struct Trajectory {
    std::vector<double> times;
    std::vector<Complex> values;
    std::string label;

    Trajectory() = default;
    Trajectory(std::vector<double> t, std::vector<Complex> v, std::string lbl = {})
        : times(std::move(t)), values(std::move(v)), label(std::move(lbl)) {
        if (times.size() != values.size()) {
            throw std::invalid_argument("trajectory times/values length mismatch");
        }
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) {
                throw std::invalid_argument("trajectory times must be strictly increasing");
            }
        }
    }

    std::size_t size() const { return times.size(); }
};

}  // namespace nmrelax
