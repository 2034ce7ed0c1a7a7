// correlations.hpp — Dipole expectation values and angular correlation functions

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "chaincorr/chain.hpp"
#include "chaincorr/liouvillian.hpp"

namespace chaincorr {

// Raised when an algebraically-real quantity comes out with a significant
// imaginary part, which indicates an internal indexing or symmetry bug.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// All one- and two-pair dipole expectation values of a state. Atom indices
// in the accessors are 1-based.
struct AtomicCorrelations {
    int n_atoms = 0;
    Eigen::MatrixXcd first_order;                    // (i-1, j-1) -> <S_i^+ S_j^->
    std::vector<std::complex<double>> second_order;  // flat N^4 table

    std::complex<double> first(int i, int j) const {
        return first_order(i - 1, j - 1);
    }
    // <S_i^+ S_j^+ S_k^- S_l^->
    std::complex<double> second(int i, int j, int k, int l) const {
        const int n = n_atoms;
        return second_order[static_cast<std::size_t>(
            (((i - 1) * n + (j - 1)) * n + (k - 1)) * n + (l - 1))];
    }
    double population(int i) const { return first(i, i).real(); }
};

AtomicCorrelations expectations(const Matrix& rho);

// Magnitude and phase of the first-order coherence between a pair of atoms:
// v = 2 |<S_i^+ S_j^->| / (I_i + I_j), psi = arg <S_i^+ S_j^->.
struct PairCoherence {
    double v = 0.0;
    double psi = 0.0;       // principal value in (-pi, pi]
    bool defined = false;   // false when the coherence magnitude underflows
};

PairCoherence pair_coherence(const AtomicCorrelations& corr, int i, int j);

// First-order angular correlation G1(theta)/(u*gamma): the phased double sum
// of <S_i^+ S_j^-> over the chain with the in-plane projection
// r_ij.R = (x_i - x_j) cos(theta).
double g1_angular(const AtomicCorrelations& corr, const ChainConfig& cfg,
                  double theta);

// Second-order angular correlation G2(theta1, theta2)/(u^2 gamma^2) for two
// detectors; detector 1 carries the (i, l) index pair of
// <S_i^+ S_j^+ S_k^- S_l^->, detector 2 the (j, k) pair. Symmetric under
// theta1 <-> theta2, and direction-independent at theta1 = theta2 for N = 2.
double g2_angular(const AtomicCorrelations& corr, const ChainConfig& cfg,
                  double theta1, double theta2);

// Normalized equal-time, equal-direction correlation g2 = G2/(G1)^2.
// Empty where (G1)^2 underflows (below 1e-30): vanishing single-photon
// emission makes the ratio meaningless rather than merely large.
std::optional<double> g2_normalized(const AtomicCorrelations& corr,
                                    const ChainConfig& cfg, double theta);

// Difference measure C2 = G2/u^2 - (G1/u)^2. Positive where simultaneous
// pair emission dominates, finite even where g2 is undefined.
double c2(const AtomicCorrelations& corr, const ChainConfig& cfg, double theta);

// Pair-emission coherence summary. eta is the two-atom normalized pair
// probability 4 <S_1^+ S_2^+ S_1^- S_2^-> / (I_1 + I_2)^2. For N = 3 the
// equal-angle G2 decomposes over the three atom pairs {1,2}, {2,3}, {3,1}
// exactly like G1 does over atoms:
//   G2(theta,theta)/u^2 = 4 sum_a (G_a + G_b)[1/2 + sigma_ab cos(k d_ab cos(theta) - phi_ab)]
// with G_a = <S_a^+ S_a^-> of pair a, modulation distances d_12 = d_23 = d,
// d_31 = 2d, and cross coherences
//   sigma_12, phi_12 from <S_1^+ S_3^+ S_1^- S_2^->   (pairs {1,3} -> {1,2})
//   sigma_23, phi_23 from <S_2^+ S_3^+ S_1^- S_3^->   (pairs {2,3} -> {1,3})
//   sigma_31, phi_31 from <S_2^+ S_3^+ S_1^- S_2^->   (pairs {2,3} -> {1,2})
// where phi is minus the argument of the listed expectation value. The
// decomposition is pinned by requiring it to reproduce g2_angular exactly.
struct SecondOrderCoherences {
    bool eta_defined = false;
    double eta = 0.0;
    bool sigma_defined = false;  // populated for N = 3 with nonzero pair signal
    double pair_signal[3] = {0, 0, 0};  // G_{12}, G_{23}, G_{31}
    double sigma[3] = {0, 0, 0};        // sigma_12, sigma_23, sigma_31
    double phi[3] = {0, 0, 0};          // phi_12, phi_23, phi_31
};

SecondOrderCoherences second_order_coherences(const AtomicCorrelations& corr);

// Full-circle scan of the angular quantities on a uniform grid
// theta_k = 2*pi*k/points. g2_norm entries are meaningful only where
// g2_defined is set.
struct AngularScan {
    std::vector<double> theta;       // radians, [0, 2*pi)
    std::vector<double> g1_over_u;
    std::vector<double> g2_over_u2;
    std::vector<double> g2_norm;
    std::vector<bool> g2_defined;
    std::vector<double> c2;
};

AngularScan scan_angles(const AtomicCorrelations& corr, const ChainConfig& cfg,
                        int points = 3600);

} // namespace chaincorr
