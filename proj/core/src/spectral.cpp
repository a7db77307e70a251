#include "nmrelax/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace nmrelax {

namespace {

constexpr Complex kI{0.0, 1.0};

double param_scale(double gamma_II, double J, double omega1) {
    return std::max({std::abs(J), gamma_II, std::abs(omega1), 1.0});
}

// Newton refinement of a root of the depressed characteristic cubic
//   mu^3 + D mu - rhs = 0,   mu = lambda + gamma_II,
// which evaluates without the cancellation that plagues the cubic in lambda
// when the small real root sits near -gamma_II.
Complex polish_depressed_root(Complex mu, double D, double rhs) {
    for (int it = 0; it < 12; ++it) {
        const Complex q = (mu * mu + D) * mu - rhs;
        const Complex dq = 3.0 * mu * mu + D;
        if (dq == Complex{0.0}) break;
        const Complex step = q / dq;
        mu -= step;
        if (std::abs(step) <= 1e-17 * std::abs(mu)) break;
    }
    return mu;
}

}  // namespace

Eigen::Matrix3cd reduced_generator(double gamma_II, double J, double omega1) {
    Eigen::Matrix3cd m;
    m << 0.0, 0.0, -kI * J,
         0.0, -gamma_II, -2.0 * omega1,
         -kI * J, 2.0 * omega1, -2.0 * gamma_II;
    return m;
}

Eigen::Matrix3cd reduced_generator(const ModelParams& p) {
    return reduced_generator(p.gamma_II, p.J, p.omega1);
}

std::array<Complex, 3> companion_roots(double gamma_II, double J, double omega1) {
    // Characteristic polynomial of M':
    //   lambda^3 + 3*g*lambda^2 + (2g^2 + 4w^2 + J^2)*lambda + J^2*g
    const double a = 3.0 * gamma_II;
    const double b = 2.0 * gamma_II * gamma_II + 4.0 * omega1 * omega1 + J * J;
    const double c = J * J * gamma_II;
    Eigen::Matrix3d comp;
    comp << 0.0, 0.0, -c,
            1.0, 0.0, -b,
            0.0, 1.0, -a;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp, false);
    const auto ev = es.eigenvalues();
    const double D = J * J - gamma_II * gamma_II + 4.0 * omega1 * omega1;
    const double rhs = 4.0 * gamma_II * omega1 * omega1;
    std::array<Complex, 3> roots;
    for (int i = 0; i < 3; ++i) {
        roots[static_cast<std::size_t>(i)] =
            polish_depressed_root(ev(i) + gamma_II, D, rhs) - gamma_II;
    }
    return roots;
}

SpectralData cubic_spectrum_raw(double gamma_II, double J, double omega1) {
    SpectralData sd;
    sd.m_half = 0.5 * reduced_generator(gamma_II, J, omega1);
    sd.D = J * J - gamma_II * gamma_II + 4.0 * omega1 * omega1;

    const double s = param_scale(gamma_II, J, omega1);
    const double eps = 1e-8 * s;

    const double w2 = omega1 * omega1;
    const double radicand = 108.0 * gamma_II * gamma_II * w2 * w2 + sd.D * sd.D * sd.D;

    bool closed = gamma_II > eps && std::abs(J) > eps && radicand > 0.0 &&
                  std::sqrt(radicand) > 1e-8 * s * s * s;

    if (closed) {
        // Cardano with the real cube root of a positive radicand.
        const double C = std::cbrt(54.0 * gamma_II * w2 +
                                   3.0 * std::sqrt(3.0) * std::sqrt(radicand));
        sd.C = C;
        const double doc = sd.D / C;
        const Complex half_p{0.5, 0.5 * std::sqrt(3.0)};   // (1 + sqrt(3) i)/2
        const Complex half_m = std::conj(half_p);          // (1 - sqrt(3) i)/2
        // Work with mu = lambda + gamma. The Cardano expressions cancel badly
        // when the parameters span many orders of magnitude (mu_1 can sit far
        // below the rounding noise of C/3 - D/C); Newton refinement restores
        // full relative precision, which the eigenvector formula depends on.
        const double rhs = 4.0 * gamma_II * w2;
        const double mu1 =
            polish_depressed_root(C / 3.0 - doc, sd.D, rhs).real();  // isolated real root
        const Complex mu2 =
            polish_depressed_root(half_p * doc - half_m * (C / 3.0), sd.D, rhs);
        // mu1 - gamma cancels in turn when J << omega1 (lambda_1 ~ -J^2
        // gamma / 4 omega1^2); refine the real root once more against the
        // cubic in lambda, whose constant term J^2 gamma sets its own scale.
        double l1r = mu1 - gamma_II;
        const double cb = 2.0 * gamma_II * gamma_II + 4.0 * w2 + J * J;
        const double cc = J * J * gamma_II;
        for (int it = 0; it < 12; ++it) {
            const double p = ((l1r + 3.0 * gamma_II) * l1r + cb) * l1r + cc;
            const double dp = (3.0 * l1r + 6.0 * gamma_II) * l1r + cb;
            if (dp == 0.0) break;
            const double step = p / dp;
            l1r -= step;
            if (std::abs(step) <= 1e-17 * std::abs(l1r)) break;
        }
        const Complex l1{l1r};
        const Complex l2 = mu2 - gamma_II;
        const Complex l3 = std::conj(l2);
        sd.lambda = {l1, l2, l3};
        closed = std::abs(l1 - l2) > eps && std::abs(l2 - l3) > eps &&
                 std::abs(l1 - l3) > eps;
        if (closed) {
            const double lam1 = l1.real();
            const double l2R = l2.real();
            const double l2I = l2.imag();
            const double mod2 = std::norm(l2);
            const double den =
                gamma_II * ((lam1 - l2R) * (lam1 - l2R) + l2I * l2I);
            const double u1 = mod2 * mu1 / den;
            const double u2R =
                (lam1 * lam1 * gamma_II - lam1 * (mod2 + 2.0 * l2R * gamma_II)) /
                (2.0 * den);
            const double u2I = (lam1 * (lam1 - l2R) * (mod2 + l2R * gamma_II) +
                                lam1 * l2I * l2I * gamma_II) /
                               (2.0 * l2I * den);
            sd.u = {Complex{u1, 0.0}, Complex{u2R, u2I}, Complex{u2R, -u2I}};
            const std::array<Complex, 3> mu{Complex{mu1}, mu2, std::conj(mu2)};
            for (int i = 0; i < 3; ++i) {
                const Complex lam = sd.lambda[static_cast<std::size_t>(i)];
                Eigen::Vector3cd v;
                if (mu[static_cast<std::size_t>(i)] != Complex{0.0}) {
                    v << 1.0,
                        -2.0 * kI * (omega1 / J) * lam / mu[static_cast<std::size_t>(i)],
                        kI * lam / J;
                } else {
                    // mu = 0 happens only at omega1 = 0, where the b_y row
                    // decouples and the eigenvector is exactly e_y.
                    v << 0.0, 1.0, 0.0;
                }
                sd.V.col(i) = v;
            }
            sd.method = SpectralData::Method::closed_form;
            return sd;
        }
    }

    // Numeric fallback: eigen-decompose M' directly; coefficients from V u = e1.
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> ces(2.0 * sd.m_half, true);
    for (int i = 0; i < 3; ++i) {
        sd.lambda[static_cast<std::size_t>(i)] = ces.eigenvalues()(i);
    }
    sd.V = ces.eigenvectors();
    sd.method = SpectralData::Method::numeric_fallback;

    const double gap = std::min({std::abs(sd.lambda[0] - sd.lambda[1]),
                                 std::abs(sd.lambda[1] - sd.lambda[2]),
                                 std::abs(sd.lambda[0] - sd.lambda[2])});
    if (gap <= eps) {
        sd.degenerate = true;
        sd.u = {Complex{0.0}, Complex{0.0}, Complex{0.0}};
        return sd;
    }
    const Eigen::Vector3cd u =
        sd.V.colPivHouseholderQr().solve(Eigen::Vector3cd(1.0, 0.0, 0.0));
    sd.u = {u(0), u(1), u(2)};
    return sd;
}

SpectralData cubic_spectrum(const ModelParams& p) {
    validate_params(p);
    return cubic_spectrum_raw(p.gamma_II, p.J, p.omega1);
}

Eigen::Matrix3cd expm3(const Eigen::Matrix3cd& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    Eigen::Matrix3cd scaled = a;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        scaled /= std::pow(2.0, squarings);
    }
    // Taylor series; converges to machine precision for ||scaled|| <= 0.5.
    Eigen::Matrix3cd result = Eigen::Matrix3cd::Identity();
    Eigen::Matrix3cd term = Eigen::Matrix3cd::Identity();
    for (int k = 1; k <= 32; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

}  // namespace nmrelax
