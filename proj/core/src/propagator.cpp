#include "nmrelax/propagator.hpp"

#include <cmath>

namespace nmrelax {

namespace {

bool coupling_off(const SpectralData& sd) {
    // J enters M' only through the (0,2)/(2,0) entries.
    return sd.m_half(0, 2) == Complex{0.0};
}

Eigen::Vector3cd bvec_impl(const SpectralData& sd, double t) {
    if (sd.degenerate) {
        return expm3(sd.m_half * t) * Eigen::Vector3cd(1.0, 0.0, 0.0);
    }
    Eigen::Vector3cd out = Eigen::Vector3cd::Zero();
    for (int i = 0; i < 3; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out += sd.u[k] * std::exp(sd.lambda[k] * (0.5 * t)) * sd.V.col(i);
    }
    return out;
}

}  // namespace

Complex b0(const SpectralData& sd, double t) {
    if (coupling_off(sd)) return Complex{1.0};
    if (sd.degenerate) return bvec_impl(sd, t)(0);
    if (sd.method == SpectralData::Method::closed_form) {
        // Real combination of the conjugate pair; lambda3 = conj(lambda2).
        const double l1 = sd.lambda[0].real();
        const double l2R = sd.lambda[1].real();
        const double l2I = sd.lambda[1].imag();
        return sd.u[0].real() * std::exp(0.5 * l1 * t) +
               2.0 * std::exp(0.5 * l2R * t) *
                   (sd.u[1].real() * std::cos(0.5 * l2I * t) -
                    sd.u[1].imag() * std::sin(0.5 * l2I * t));
    }
    // Fallback eigenvectors are unit-norm, not first-component-normalised,
    // so the V(0, k) factor must appear explicitly.
    Complex out{0.0};
    for (std::size_t k = 0; k < 3; ++k) {
        out += sd.u[k] * std::exp(sd.lambda[k] * (0.5 * t)) *
               sd.V(0, static_cast<int>(k));
    }
    return out;
}

Complex b0(const ModelParams& p, double t) {
    validate_params(p);
    if (p.J == 0.0) return Complex{1.0};
    return b0(cubic_spectrum(p), t);
}

Complex b0_deriv(const SpectralData& sd, double t) {
    if (coupling_off(sd)) return Complex{0.0};
    if (sd.degenerate) return (sd.m_half * bvec_impl(sd, t))(0);
    Complex out{0.0};
    for (std::size_t k = 0; k < 3; ++k) {
        out += sd.u[k] * (0.5 * sd.lambda[k]) * std::exp(sd.lambda[k] * (0.5 * t)) *
               sd.V(0, static_cast<int>(k));
    }
    return out;
}

Eigen::Vector3cd bvec(const SpectralData& sd, double t) {
    return bvec_impl(sd, t);
}

Eigen::Vector3cd bvec(const ModelParams& p, double t) {
    validate_params(p);
    return bvec_impl(cubic_spectrum(p), t);
}

Complex beta_n(const ModelParams& p, const SpectralData& sd, double t) {
    const double decay = std::exp(-0.5 * p.gamma_I * t);
    if (p.J == 0.0) return Complex{decay};
    return decay * std::pow(b0(sd, t), p.n);
}

Complex beta_n(const ModelParams& p, double t) {
    validate_params(p);
    if (p.J == 0.0) return Complex{std::exp(-0.5 * p.gamma_I * t)};
    return beta_n(p, cubic_spectrum(p), t);
}

double beta_abs_deriv(const ModelParams& p, const SpectralData& sd, double t) {
    const double decay = std::exp(-0.5 * p.gamma_I * t);
    if (p.J == 0.0) return -0.5 * p.gamma_I * decay;
    const Complex b = b0(sd, t);
    const double ab = std::abs(b);
    double dab;  // d|b0|/dt
    if (ab > 1e-300) {
        dab = (std::conj(b) * b0_deriv(sd, t)).real() / ab;
    } else {
        dab = std::abs(b0_deriv(sd, t));  // kink at a zero; right-limit slope
    }
    const double abn = std::pow(ab, p.n);
    const double abn1 = p.n == 1 ? 1.0 : std::pow(ab, p.n - 1);
    return decay * (-0.5 * p.gamma_I * abn + p.n * abn1 * dab);
}

DensityMatrix2 rho_I(const ModelParams& p, double theta, double t) {
    const Complex beta = beta_n(p, t);
    const Complex off = 0.5 * std::exp(Complex{0.0, theta}) * beta;
    DensityMatrix2 rho;
    rho.m << 0.5, off, std::conj(off), 0.5;
    return rho;
}

Trajectory beta_trajectory(const ModelParams& p, const TimeGrid& grid) {
    validate_params(p);
    const SpectralData sd = cubic_spectrum(p);
    const auto times = grid.times();
    std::vector<Complex> values(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        values[i] = beta_n(p, sd, times[i]);
    }
    return Trajectory(times, std::move(values), "beta_n");
}

}  // namespace nmrelax
