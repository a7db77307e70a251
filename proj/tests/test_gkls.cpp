#include <doctest.h>

#include <random>
#include <sstream>

#include "nmrelax/gkls.hpp"
#include "nmrelax/propagator.hpp"

using namespace nmrelax;
using gkls::Matrix;

namespace {

const ModelParams tms1{0.41, 0.20, two_pi * 6.6, 0.0, 1};

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i) {
        for (long j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Complex beta_at(const Matrix& rho, int n, double theta) {
    return gkls::extract_beta(gkls::partial_trace_env(rho, n), theta);
}

}  // namespace

TEST_CASE("n = 1 Hamiltonian: zz diagonal plus satellite x drive") {
    ModelParams p = tms1;
    p.omega1 = two_pi * 4.0;
    const auto g = gkls::build_star_generator(p);
    const Matrix h = g.dense_hamiltonian();

    const Matrix expected = 0.25 * p.J * kron(pauli_z(), pauli_z()) +
                            0.5 * p.omega1 * kron(Matrix::Identity(2, 2), pauli_x());
    CHECK((h - expected).cwiseAbs().maxCoeff() <= 1e-14 * p.omega1);

    // Coupling and drive on the same satellite do not commute.
    const Matrix hj = 0.25 * p.J * kron(pauli_z(), pauli_z());
    const Matrix hw = 0.5 * p.omega1 * kron(Matrix::Identity(2, 2), pauli_x());
    CHECK((hj * hw - hw * hj).cwiseAbs().maxCoeff() > 1.0);
}

TEST_CASE("J = 0, omega1 = 0 reduces to single-qubit exponential decay") {
    const ModelParams p{0.7, 0.0, 0.0, 0.0, 1};
    const auto g = gkls::build_star_generator(p);
    const TimeGrid grid(0.0, 2.0, 21);
    const auto states = gkls::evolve(g, gkls::initial_state(1, 0.0), grid, 1e-10);
    for (int i = 0; i < grid.samples; ++i) {
        const Complex beta = beta_at(states[static_cast<std::size_t>(i)], 1, 0.0);
        CHECK(std::abs(beta - std::exp(-0.5 * p.gamma_I * grid.at(i))) <= 1e-8);
    }
}

TEST_CASE("initial_state structure") {
    const Matrix rho = gkls::initial_state(1, 0.0);
    CHECK((rho - Matrix::Constant(4, 4, 0.25 * Complex{1.0})
                     .cwiseProduct((Matrix(4, 4) << 1, 0, 1, 0,
                                    0, 1, 0, 1,
                                    1, 0, 1, 0,
                                    0, 1, 0, 1).finished()))
              .cwiseAbs()
              .maxCoeff() <= 1e-15);

    const Matrix rho2 = gkls::initial_state(2, 1.3);
    CHECK(std::abs(rho2.trace() - Complex{1.0}) <= 1e-15);
    CHECK(std::abs((rho2 * rho2).trace() - Complex{0.25}) <= 1e-14);

    // theta = pi: central-qubit Bloch vector along -x.
    const Matrix rho_pi = gkls::initial_state(1, std::acos(-1.0));
    const Matrix sx0 = kron(pauli_x(), Matrix::Identity(2, 2));
    CHECK(std::abs((rho_pi * sx0).trace() - Complex{-1.0}) <= 1e-12);
}

TEST_CASE("zero generator leaves the state fixed") {
    const auto g = gkls::build_star_generator(ModelParams{0, 0, 0, 0, 2});
    const Matrix rho0 = gkls::initial_state(2, 0.4);
    const auto states = gkls::evolve(g, rho0, TimeGrid(0.0, 1.0, 5), 1e-8);
    for (const auto& rho : states) {
        CHECK((rho - rho0).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("(1+1) oracle matches the analytic coherence") {
    const auto g = gkls::build_star_generator(tms1);
    const TimeGrid grid(0.0, 1.0, 51);
    const auto states = gkls::evolve(g, gkls::initial_state(1, 0.0), grid, 1e-10);
    const SpectralData sd = cubic_spectrum(tms1);
    for (int i = 0; i < grid.samples; ++i) {
        const Complex oracle = beta_at(states[static_cast<std::size_t>(i)], 1, 0.0);
        CHECK(std::abs(oracle - beta_n(tms1, sd, grid.at(i))) <= 1e-6);
    }
}

TEST_CASE("(1+2) oracle validates the product form") {
    ModelParams p = tms1;
    p.n = 2;
    p.omega1 = two_pi * 2.1;
    const auto g = gkls::build_star_generator(p);
    const TimeGrid grid(0.0, 1.0, 26);
    const auto states = gkls::evolve(g, gkls::initial_state(2, 0.0), grid, 1e-10);
    const SpectralData sd = cubic_spectrum(p);
    for (int i = 0; i < grid.samples; ++i) {
        const Complex oracle = beta_at(states[static_cast<std::size_t>(i)], 2, 0.0);
        CHECK(std::abs(oracle - beta_n(p, sd, grid.at(i))) <= 1e-6);
    }
}

TEST_CASE("partial trace returns the first factor of a product state") {
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::Matrix2cd a;
        a << Complex{u(rng), 0.0}, Complex{u(rng), u(rng)}, 0.0, Complex{u(rng), 0.0};
        a = (a + Eigen::Matrix2cd(a.adjoint())).eval();
        a = (a * a.adjoint()).eval();
        a /= a.trace();

        Matrix env = Matrix::Random(4, 4);
        env = (env * env.adjoint()).eval();
        env /= env.trace();

        const Matrix joint = kron(a, env);
        const DensityMatrix2 reduced = gkls::partial_trace_env(joint, 2);
        CHECK((reduced.m - a).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK_THROWS_AS(gkls::partial_trace_env(Matrix::Identity(6, 6), 2),
                    std::invalid_argument);
}

TEST_CASE("extract_beta inverts the equatorial form") {
    const double theta = 0.77;
    const auto reduced = gkls::partial_trace_env(gkls::initial_state(2, theta), 2);
    CHECK(std::abs(gkls::extract_beta(reduced, theta) - Complex{1.0}) <= 1e-12);

    DensityMatrix2 mixed;
    mixed.m = 0.5 * Eigen::Matrix2cd::Identity();
    CHECK(std::abs(gkls::extract_beta(mixed, theta)) <= 1e-15);
}

TEST_CASE("integration hygiene at TMS parameters") {
    ModelParams p = tms1;
    p.n = 2;
    p.omega1 = two_pi * 3.0;
    const auto g = gkls::build_star_generator(p);
    const Matrix rho0 = gkls::initial_state(2, 0.0);
    const TimeGrid grid(0.0, 5.0, 11);
    const auto states = gkls::evolve(g, rho0, grid, 1e-10);
    for (const auto& rho : states) {
        CHECK(std::abs(rho.trace() - Complex{1.0}) <= 1e-9);
        CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-9);
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-8);
        // Populations stay at their initial values.
        for (long j = 0; j < rho.rows(); ++j) {
            CHECK(std::abs(rho(j, j) - rho0(j, j)) <= 1e-8);
        }
    }
}

TEST_CASE("extracted beta is independent of the equatorial phase") {
    ModelParams p = tms1;
    p.omega1 = two_pi * 2.0;
    const auto g = gkls::build_star_generator(p);
    const TimeGrid grid(0.0, 0.6, 7);
    std::vector<Complex> betas;
    for (double theta : {0.0, 0.3, 1.7, 3.0}) {
        const auto states = gkls::evolve(g, gkls::initial_state(1, theta), grid, 1e-10);
        betas.push_back(beta_at(states.back(), 1, theta));
    }
    for (std::size_t i = 1; i < betas.size(); ++i) {
        CHECK(std::abs(betas[i] - betas[0]) <= 1e-8);
    }
}

TEST_CASE("central-qubit damping factorises out") {
    ModelParams undamped = tms1;
    undamped.omega1 = two_pi * 1.5;
    undamped.gamma_I = 0.0;
    ModelParams damped = undamped;
    damped.gamma_I = 0.41;

    const TimeGrid grid(0.0, 1.0, 11);
    const auto s_free = gkls::evolve(gkls::build_star_generator(undamped),
                                     gkls::initial_state(1, 0.0), grid, 1e-10);
    const auto s_damp = gkls::evolve(gkls::build_star_generator(damped),
                                     gkls::initial_state(1, 0.0), grid, 1e-10);
    for (int i = 0; i < grid.samples; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const Complex rescaled =
            std::exp(-0.5 * damped.gamma_I * grid.at(i)) * beta_at(s_free[k], 1, 0.0);
        CHECK(std::abs(rescaled - beta_at(s_damp[k], 1, 0.0)) <= 1e-7);
    }
}

TEST_CASE("satellite permutation symmetry for n = 2") {
    ModelParams p = tms1;
    p.n = 2;
    p.omega1 = two_pi * 2.5;
    const auto g = gkls::build_star_generator(p);
    const auto states =
        gkls::evolve(g, gkls::initial_state(2, 0.0), TimeGrid(0.0, 0.8, 5), 1e-10);

    // Swap the two satellite qubits (bits 1 and 0 of the 3-bit index).
    auto swap_sat = [](long idx) {
        const long central = idx & 4;
        const long b1 = (idx >> 1) & 1;
        const long b2 = idx & 1;
        return central | (b2 << 1) | b1;
    };
    const auto& rho = states.back();
    for (long j = 0; j < 8; ++j) {
        for (long k = 0; k < 8; ++k) {
            CHECK(std::abs(rho(j, k) - rho(swap_sat(j), swap_sat(k))) <= 1e-9);
        }
    }
}

TEST_CASE("capacity and precondition errors") {
    ModelParams p = tms1;
    p.n = 13;
    CHECK_THROWS_AS(gkls::build_star_generator(p), std::invalid_argument);

    const auto g = gkls::build_star_generator(tms1);
    CHECK_THROWS_AS(gkls::evolve(g, Matrix::Identity(8, 8), TimeGrid(0, 1, 3), 1e-8),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        gkls::evolve(g, gkls::initial_state(1, 0.0), TimeGrid(0, 1, 3), 1e-2),
        std::invalid_argument);
}

TEST_CASE("diagnostics dump has the fixed column layout") {
    const auto g = gkls::build_star_generator(tms1);
    std::ostringstream out;
    gkls::dump_diagnostics(g, gkls::initial_state(1, 0.0), TimeGrid(0.0, 0.1, 3),
                           1e-8, 0.0, out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t_s,re_beta,im_beta,trace_defect,herm_defect");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
}
