// couplings.hpp — Collective damping and dipole-dipole shift coefficients

#pragma once

#include <Eigen/Dense>

#include "chaincorr/chain.hpp"

namespace chaincorr {

struct CouplingMatrices {
    Eigen::MatrixXd gamma;  // pairwise decay rates gamma_ij, units of gamma; diagonal 1
    Eigen::MatrixXd omega;  // dipole-dipole shifts Omega_ij, units of gamma; diagonal 0
};

// Dimensionless retardation phase xi = 2*pi*r/lambda of a pair separated by r.
double xi(double separation_over_lambda);

// Collective decay coefficient gamma_ij/gamma for a pair at phase xi with
// dipole projection m = mu.r_ij (m = 0 in the production pipeline, where the
// dipoles are perpendicular to the chain):
//   (3/2) { (1 - m^2) sin(xi)/xi + (1 - 3 m^2) [cos(xi)/xi^2 - sin(xi)/xi^3] }
// Tends to 1 as xi -> 0 and to 0 as xi -> infinity.
double collective_decay(double xi, double mu_dot_rhat = 0.0);

// Dipole-dipole shift Omega_ij/gamma:
//   (3/4) { -(1 - m^2) cos(xi)/xi + (1 - 3 m^2) [sin(xi)/xi^2 + cos(xi)/xi^3] }
// Diverges like (3/4)(1 - 3 m^2)/xi^3 toward contact; coincident atoms are
// rejected rather than regularized.
double dipole_shift(double xi, double mu_dot_rhat = 0.0);

// Assemble both N x N matrices for an equidistant chain. Entry (i, j) is
// evaluated at xi_ij = 2*pi*|i - j|*spacing; both matrices are symmetric and
// depend on |i - j| only.
CouplingMatrices build_couplings(const ChainConfig& cfg);

} // namespace chaincorr
