#include "nmrelax/gkls.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nmrelax::gkls {

namespace {

constexpr Complex kI{0.0, 1.0};

// Qubit q occupies bit (n - q); qubit 0 is the most significant bit, so the
// basis index reads |q0 q1 ... qn> directly. Bit value 1 means spin down.
long mask_of(int n, int qubit) { return 1L << (n - qubit); }

}  // namespace

Matrix Generator::dense_hamiltonian() const {
    const long d = dim();
    Matrix h = h_diag.cast<Complex>().asDiagonal();
    for (int q = 1; q <= n; ++q) {
        const long m = mask_of(n, q);
        for (long j = 0; j < d; ++j) {
            h(j, j ^ m) += 0.5 * omega1;
        }
    }
    return h;
}

Matrix Generator::apply_rhs(const Matrix& rho) const {
    const long d = dim();
    Matrix out(d, d);

    // -i [diag(h), rho]
    for (long k = 0; k < d; ++k) {
        for (long j = 0; j < d; ++j) {
            out(j, k) = -kI * (h_diag(j) - h_diag(k)) * rho(j, k);
        }
    }

    // -i (omega1/2) [X_q, rho] for each driven satellite
    if (omega1 != 0.0) {
        const Complex c = -kI * 0.5 * omega1;
        for (int q = 1; q <= n; ++q) {
            const long m = mask_of(n, q);
            for (long k = 0; k < d; ++k) {
                for (long j = 0; j < d; ++j) {
                    out(j, k) += c * (rho(j ^ m, k) - rho(j, k ^ m));
                }
            }
        }
    }

    // rate * (2 L rho L† - {L†L, rho}) with L = sigma_pm / 2:
    //   sandwich (rate/2) * sigma_pm rho sigma_mp, anticommutator (rate/4) * {P, rho}
    for (const auto& ch : jumps) {
        if (ch.rate == 0.0) continue;
        const long m = mask_of(n, ch.qubit);
        // For sigma_plus the sandwich lands on bit-cleared indices and the
        // projector sigma_minus sigma_plus selects bit-set indices.
        const long target = ch.raising ? 0L : m;
        const double half = 0.5 * ch.rate;
        const double quarter = 0.25 * ch.rate;
        for (long k = 0; k < d; ++k) {
            const bool k_in = (k & m) == target;
            for (long j = 0; j < d; ++j) {
                const bool j_in = (j & m) == target;
                if (j_in && k_in) out(j, k) += half * rho(j ^ m, k ^ m);
                double anti = 0.0;
                if (!j_in) anti += quarter;
                if (!k_in) anti += quarter;
                if (anti != 0.0) out(j, k) -= anti * rho(j, k);
            }
        }
    }
    return out;
}

Generator build_star_generator(const ModelParams& p) {
    validate_params(p);
    if (p.n > max_oracle_satellites) {
        throw std::invalid_argument("brute-force generator supports n <= " +
                                    std::to_string(max_oracle_satellites));
    }
    Generator g;
    g.n = p.n;
    g.omega1 = p.omega1;
    const long d = g.dim();
    g.h_diag.resize(d);
    const long m0 = mask_of(p.n, 0);
    for (long j = 0; j < d; ++j) {
        const double z0 = (j & m0) ? -1.0 : 1.0;
        double e = 0.0;
        for (int q = 1; q <= p.n; ++q) {
            const double zq = (j & mask_of(p.n, q)) ? -1.0 : 1.0;
            e += 0.25 * p.J * z0 * zq;
        }
        g.h_diag(j) = e;
    }
    for (int q = 0; q <= p.n; ++q) {
        const double rate = q == 0 ? p.gamma_I : p.gamma_II;
        g.jumps.push_back({q, true, rate});
        g.jumps.push_back({q, false, rate});
    }
    return g;
}

Matrix initial_state(int n, double theta) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const long env_dim = 1L << n;
    const double w = 1.0 / (2.0 * env_dim);
    const Complex phase = std::exp(kI * theta);
    Matrix rho = Matrix::Zero(2 * env_dim, 2 * env_dim);
    for (long e = 0; e < env_dim; ++e) {
        rho(e, e) = w;
        rho(env_dim + e, env_dim + e) = w;
        rho(e, env_dim + e) = w * phase;
        rho(env_dim + e, e) = w * std::conj(phase);
    }
    return rho;
}

std::vector<Matrix> evolve(const Generator& g, const Matrix& rho0,
                           const TimeGrid& grid, double tol) {
    if (rho0.rows() != g.dim() || rho0.cols() != g.dim()) {
        throw std::invalid_argument("evolve: state dimension mismatch");
    }
    if (!(tol >= 1e-12 && tol <= 1e-4)) {
        throw std::invalid_argument("evolve: tol must be in [1e-12, 1e-4]");
    }

    double w_max = 1.0;
    for (const auto& ch : g.jumps) w_max = std::max(w_max, ch.rate);
    w_max = std::max({w_max, std::abs(g.omega1),
                      g.h_diag.cwiseAbs().maxCoeff() * 4.0 / std::max(1, g.n)});

    const double span = grid.t_end - grid.t_start;
    double dt = std::min(grid.dt(), 1.0 / (50.0 * w_max));
    // Tighten until the estimated accumulated RK4 error is within tol.
    const double err_scale = span * w_max / 120.0;
    while (err_scale * std::pow(w_max * dt, 4) > tol) dt *= 0.5;
    if (dt < 1e-15 * std::max(grid.t_end, 1.0)) {
        throw std::runtime_error("evolve: step size underflow");
    }

    const int substeps = std::max(1, static_cast<int>(std::ceil(grid.dt() / dt)));
    const double h = grid.dt() / substeps;

    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(grid.samples));
    Matrix rho = rho0;
    out.push_back(rho);
    for (int i = 1; i < grid.samples; ++i) {
        for (int s = 0; s < substeps; ++s) {
            const Matrix k1 = g.apply_rhs(rho);
            const Matrix k2 = g.apply_rhs(rho + (0.5 * h) * k1);
            const Matrix k3 = g.apply_rhs(rho + (0.5 * h) * k2);
            const Matrix k4 = g.apply_rhs(rho + h * k3);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!rho.allFinite()) {
            std::ostringstream msg;
            msg << "evolve: non-finite state entries at t = " << grid.at(i);
            throw std::runtime_error(msg.str());
        }
        out.push_back(rho);
    }
    return out;
}

DensityMatrix2 partial_trace_env(const Matrix& rho, int n) {
    const long env_dim = 1L << n;
    if (rho.rows() != 2 * env_dim || rho.cols() != 2 * env_dim) {
        throw std::invalid_argument("partial_trace_env: dimension mismatch");
    }
    DensityMatrix2 out;
    out.m.setZero();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Complex sum{0.0};
            for (long e = 0; e < env_dim; ++e) {
                sum += rho(a * env_dim + e, b * env_dim + e);
            }
            out.m(a, b) = sum;
        }
    }
    return out;
}

Complex extract_beta(const DensityMatrix2& rho_I, double theta) {
    return 2.0 * std::exp(-kI * theta) * rho_I.m(0, 1);
}

void dump_diagnostics(const Generator& g, const Matrix& rho0,
                      const TimeGrid& grid, double tol, double theta,
                      std::ostream& out) {
    const auto states = evolve(g, rho0, grid, tol);
    out << "t_s,re_beta,im_beta,trace_defect,herm_defect\n";
    std::ostringstream row;
    row.precision(17);
    for (int i = 0; i < grid.samples; ++i) {
        const auto& rho = states[static_cast<std::size_t>(i)];
        const Complex beta =
            extract_beta(partial_trace_env(rho, g.n), theta);
        const double trace_defect = std::abs(rho.trace() - Complex{1.0});
        const double herm_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        row.str({});
        row << grid.at(i) << ',' << beta.real() << ',' << beta.imag() << ','
            << trace_defect << ',' << herm_defect << '\n';
        out << row.str();
    }
}

}  // namespace nmrelax::gkls
