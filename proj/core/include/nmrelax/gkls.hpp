// gkls.hpp — Dense brute-force integrator for the full (1+n)-qubit GKLS equation

#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "nmrelax/model.hpp"
#include "nmrelax/propagator.hpp"

namespace nmrelax::gkls {

using Matrix = Eigen::MatrixXcd;

/// One flip-flop jump channel: L = sigma_plus^{(qubit)}/2 or
/// sigma_minus^{(qubit)}/2, entering as rate * (2 L rho L† - {L†L, rho}).
struct JumpChannel {
    int qubit{0};
    bool raising{true};  // sigma_plus (|1> -> |0>) vs sigma_minus
    double rate{0.0};
};

/// Generator of the star model on n+1 qubits. The Hamiltonian is kept in
/// structured form (diagonal zz part plus single-qubit x drives) and the
/// jump operators as index/flag pairs; nothing of size 2^{n+1} x 2^{n+1}
/// is materialised besides the state itself.
struct Generator {
    int n{1};                          // satellite count; dimension is 2^{n+1}
    double omega1{0.0};                // x drive on every satellite
    Eigen::VectorXd h_diag;            // diagonal of sum_i J sz0 szi / 4
    std::vector<JumpChannel> jumps;

    long dim() const { return 1L << (n + 1); }

    /// Dense Hamiltonian, for tests and small n.
    Matrix dense_hamiltonian() const;

    /// d rho / dt = -i [H, rho] + sum_channels rate (2 L rho L† - {L†L, rho}).
    Matrix apply_rhs(const Matrix& rho) const;
};

/// Builds H = sum_i J sz^{(0)} sz^{(i)}/4 + omega1 sx^{(i)}/2 together with
/// the flip-flop channels at gamma_I (central) and gamma_II (satellites).
/// Qubit 0 is the most significant bit; basis state |ab...d> has a = qubit 0.
Generator build_star_generator(const ModelParams& p);

/// (1/2)[[1, e^{i theta}],[e^{-i theta}, 1]] on qubit 0, maximally mixed
/// satellites.
Matrix initial_state(int n, double theta);

/// Fixed-step RK4 over the grid; states are returned at the grid times
/// (the first entry is rho0). The substep is capped at 1/(50 * w_max) and
/// tightened further until the estimated global error is below tol.
/// No trace renormalisation is applied.
std::vector<Matrix> evolve(const Generator& g, const Matrix& rho0,
                           const TimeGrid& grid, double tol);

/// Reduced 2x2 state of qubit 0.
DensityMatrix2 partial_trace_env(const Matrix& rho, int n);

/// Inverts rho_I = 1/2 [[1, e^{i theta} beta],[e^{-i theta} beta*, 1]].
Complex extract_beta(const DensityMatrix2& rho_I, double theta);

/// Diagnostic CSV: t, Re beta, Im beta, trace defect, hermiticity defect.
void dump_diagnostics(const Generator& g, const Matrix& rho0,
                      const TimeGrid& grid, double tol, double theta,
                      std::ostream& out);

}  // namespace nmrelax::gkls
