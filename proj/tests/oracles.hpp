// oracles.hpp — Independent closed-form evaluators and helpers for the tests.
// Everything here reconstructs angular quantities directly from the raw
// correlator tables, bypassing the library's phased-sum path, so the two
// routes check each other.

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "chaincorr/chain.hpp"
#include "chaincorr/correlations.hpp"

namespace oracles {

using chaincorr::AtomicCorrelations;
using chaincorr::ChainConfig;
using chaincorr::Matrix;
using std::complex;

constexpr double pi = M_PI;

// Interference form of the two-atom first-order pattern:
// (I1 + I2) [1 + v cos(k r cos(theta) - psi)].
inline double two_atom_g1(const AtomicCorrelations& corr, const ChainConfig& cfg,
                          double theta) {
    const complex<double> z = corr.first(1, 2);
    const double i1 = corr.population(1);
    const double i2 = corr.population(2);
    const double v = 2.0 * std::abs(z) / (i1 + i2);
    const double psi = std::arg(z);
    const double kr = chaincorr::wavenumber * cfg.spacing_over_lambda;
    return (i1 + i2) * (1.0 + v * std::cos(kr * std::cos(theta) - psi));
}

// Two-detector fringe of the two-atom pair correlation:
// 2 <S1+ S2+ S1- S2-> {1 + cos[k r (cos(theta1) - cos(theta2))]}.
inline double two_atom_g2(const AtomicCorrelations& corr, const ChainConfig& cfg,
                          double theta1, double theta2) {
    const double pair = corr.second(1, 2, 1, 2).real();
    const double kr = chaincorr::wavenumber * cfg.spacing_over_lambda;
    return 2.0 * pair * (1.0 + std::cos(kr * (std::cos(theta1) - std::cos(theta2))));
}

// Normalized two-atom correlation eta / [1 + v cos(k r cos(theta) - psi)]^2
// with eta = 4 <S1+ S2+ S1- S2-> / (I1 + I2)^2.
inline double two_atom_g2_normalized(const AtomicCorrelations& corr, const ChainConfig& cfg,
                                     double theta) {
    const double i12 = corr.population(1) + corr.population(2);
    const double eta = 4.0 * corr.second(1, 2, 1, 2).real() / (i12 * i12);
    const complex<double> z = corr.first(1, 2);
    const double v = 2.0 * std::abs(z) / i12;
    const double psi = std::arg(z);
    const double kr = chaincorr::wavenumber * cfg.spacing_over_lambda;
    const double mod = 1.0 + v * std::cos(kr * std::cos(theta) - psi);
    return eta / (mod * mod);
}

// Pair-sum form of the three-atom first-order pattern:
// sum over pairs i<j of (I_i + I_j)[1/2 + v_ij cos(k r_ij cos(theta) - psi_ij)].
inline double three_atom_g1(const AtomicCorrelations& corr, const ChainConfig& cfg,
                            double theta) {
    const double c = std::cos(theta);
    double total = 0.0;
    for (int i = 1; i <= 3; ++i) {
        for (int j = i + 1; j <= 3; ++j) {
            const complex<double> z = corr.first(i, j);
            const double ii = corr.population(i);
            const double ij = corr.population(j);
            const double v = 2.0 * std::abs(z) / (ii + ij);
            const double psi = std::arg(z);
            const double kr = chaincorr::wavenumber * (j - i) * cfg.spacing_over_lambda;
            total += (ii + ij) * (0.5 + v * std::cos(kr * c - psi));
        }
    }
    return total;
}

// Pair-decomposition of the three-atom equal-angle pair correlation, written
// directly from the two-pair correlators:
// 4 [ G12 + G23 + G31 + 2 Re(<S1+S3+S1-S2-> e^{i k d c})
//                     + 2 Re(<S2+S3+S1-S3-> e^{i k d c})
//                     + 2 Re(<S2+S3+S1-S2-> e^{i 2 k d c}) ].
inline double three_atom_g2(const AtomicCorrelations& corr, const ChainConfig& cfg,
                            double theta) {
    const double c = std::cos(theta);
    const double kd = chaincorr::wavenumber * cfg.spacing_over_lambda;
    const double g12 = corr.second(1, 2, 1, 2).real();
    const double g23 = corr.second(2, 3, 2, 3).real();
    const double g31 = corr.second(1, 3, 1, 3).real();
    const complex<double> phase1 = std::polar(1.0, kd * c);
    const complex<double> phase2 = std::polar(1.0, 2.0 * kd * c);
    const double cross = 2.0 * std::real(corr.second(1, 3, 1, 2) * phase1) +
                         2.0 * std::real(corr.second(2, 3, 1, 3) * phase1) +
                         2.0 * std::real(corr.second(2, 3, 1, 2) * phase2);
    return 4.0 * (g12 + g23 + g31 + cross);
}

// Same quantity assembled from the sigma/phi decomposition, exercising
// second_order_coherences against the direct route.
inline double three_atom_g2_from_sigma(const chaincorr::SecondOrderCoherences& so,
                                       const ChainConfig& cfg, double theta) {
    const double c = std::cos(theta);
    const double kd = chaincorr::wavenumber * cfg.spacing_over_lambda;
    const double g12 = so.pair_signal[0];
    const double g23 = so.pair_signal[1];
    const double g31 = so.pair_signal[2];
    return 4.0 * ((g12 + g23) * (0.5 + so.sigma[0] * std::cos(kd * c - so.phi[0])) +
                  (g23 + g31) * (0.5 + so.sigma[1] * std::cos(kd * c - so.phi[1])) +
                  (g31 + g12) * (0.5 + so.sigma[2] * std::cos(2.0 * kd * c - so.phi[2])));
}

// Grid index of 2*pi - theta_k (reflection through the chain axis).
inline int reflect_index(int k, int n) { return (n - k) % n; }

// Grid index of pi - theta_k (flip across the vertical); n must be even.
inline int flip_index(int k, int n) { return ((n / 2 - k) % n + n) % n; }

// Random density matrix: A A^dagger normalized to unit trace.
inline Matrix random_density(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss;
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) a(i, j) = complex<double>(gauss(rng), gauss(rng));
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

// Random Hermitian matrix with entries of order one.
inline Matrix random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss;
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) a(i, j) = complex<double>(gauss(rng), gauss(rng));
    }
    return (a + a.adjoint()).eval() / 2.0;
}

// Relative difference with a floor so exact zeros compare equal.
inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

} // namespace oracles
