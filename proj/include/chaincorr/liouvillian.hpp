// liouvillian.hpp — Atomic operators, master-equation generator, steady state

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "chaincorr/chain.hpp"
#include "chaincorr/couplings.hpp"

namespace chaincorr {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class solver_error : public std::runtime_error {
public:
    solver_error(const std::string& what, int kernel_dimension, double residual)
        : std::runtime_error(what),
          kernel_dimension_(kernel_dimension),
          residual_(residual) {}

    int kernel_dimension() const { return kernel_dimension_; }
    double residual() const { return residual_; }

private:
    int kernel_dimension_;
    double residual_;
};

class integration_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Single-atom basis: |g> = index 0, |e> = index 1. The N-atom product basis
// orders atom 1 as the most significant factor, so the basis index of a
// configuration is sum_i bit_i * 2^(N-i) with bit_i = 1 when atom i is
// excited. Index 0 is the all-ground state. The lowering operator of atom i
// is I x ... x |g><e| x ... x I with the 2x2 block in slot i. This layout is
// pinned by a regression test; correlation indexing depends on it.
Matrix lowering_operator(int n_atoms, int atom);  // S_i^-, atom 1-based
Matrix raising_operator(int n_atoms, int atom);   // S_i^+

// All-ground density matrix |g...g><g...g|.
Matrix ground_state(int n_atoms);

// Coherent part in the frame rotating at the transition frequency, units of
// hbar*gamma:
//   H = Omega (S_l^+ + S_l^-) + 2 sum_{i != j} Omega_ij S_i^+ S_j^-
// Drive and exchange enter at twice the half-Rabi/shift normalization; the
// two-atom steady-state coherence phase and the three-atom pair-emission
// peak directions pin this choice (see the regression tests).
Matrix build_hamiltonian(const ChainConfig& cfg, const CouplingMatrices& cpl);

// Vectorized generator (column stacking, 4^N x 4^N) of
//   d rho/dt = -i [H, rho]
//              - (1/2) sum_{i,j} gamma_ij (S_i^+ S_j^- rho + rho S_i^+ S_j^-
//                                          - 2 S_j^- rho S_i^+).
// Trace- and Hermiticity-preserving by construction.
Matrix build_generator(const Matrix& hamiltonian, const CouplingMatrices& cpl);

// Column-stacking vectorization: vec(rho)[i + j*D] = rho(i, j).
Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v);

struct SteadyState {
    Matrix rho;
    double residual;        // |L vec(rho)|_inf / |L|_inf
    int kernel_dimension;   // detected null-space dimension; 1 on success
};

// Solve L[rho] = 0 with tr rho = 1: the trace functional is appended to the
// generator as an extra row and the system is solved by rank-revealing
// least squares with iterative refinement. A null space of dimension != 1
// or a residual above residual_tol raises solver_error.
SteadyState steady_state(const Matrix& generator, double residual_tol = 1e-10);

// Fixed-step 4th-order time integration of the generator, used as an
// independent cross-check of steady_state. Trace drift beyond 1e-6 or entry
// blow-up aborts with integration_error (step size too large for the
// spectrum).
Matrix evolve(const Matrix& rho0, const Matrix& generator, double t_final,
              double dt = 0.01);

struct DensityCheck {
    double hermiticity_error;  // max |rho - rho^dagger|
    double trace_error;        // |tr rho - 1|
    double min_eigenvalue;     // smallest eigenvalue of the hermitized matrix
};

DensityCheck check_density_matrix(const Matrix& rho);

} // namespace chaincorr
