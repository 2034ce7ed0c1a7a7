#include "chaincorr/couplings.hpp"

#include <cmath>

namespace chaincorr {

namespace {

// cos(x)/x^2 - sin(x)/x^3 cancels catastrophically toward x = 0 (both terms
// grow like 1/x^2 while the difference tends to -1/3), so switch to the
// series of (x cos x - sin x)/x^3 below the crossover. At x = 0.25 both
// branches agree to ~1e-14.
double cos2_minus_sin3(double x) {
    if (x < 0.25) {
        const double x2 = x * x;
        return -1.0 / 3.0 +
               x2 * (1.0 / 30.0 +
                     x2 * (-1.0 / 840.0 +
                           x2 * (1.0 / 45360.0 - x2 / 3991680.0)));
    }
    return std::cos(x) / (x * x) - std::sin(x) / (x * x * x);
}

void require_positive(double xi) {
    if (!(xi > 0.0)) {
        throw invalid_spacing("pair phase xi must be positive, got " + std::to_string(xi));
    }
}

} // namespace

double xi(double separation_over_lambda) {
    if (!(separation_over_lambda > 0.0)) {
        throw invalid_spacing("separation must be positive, got " +
                              std::to_string(separation_over_lambda));
    }
    return wavenumber * separation_over_lambda;
}

double collective_decay(double xi, double mu_dot_rhat) {
    require_positive(xi);
    const double m2 = mu_dot_rhat * mu_dot_rhat;
    return 1.5 * ((1.0 - m2) * std::sin(xi) / xi + (1.0 - 3.0 * m2) * cos2_minus_sin3(xi));
}

double dipole_shift(double xi, double mu_dot_rhat) {
    require_positive(xi);
    const double m2 = mu_dot_rhat * mu_dot_rhat;
    // No cancellation here: the 1/xi^3 term dominates small xi and the three
    // terms stay well separated in magnitude.
    return 0.75 * (-(1.0 - m2) * std::cos(xi) / xi +
                   (1.0 - 3.0 * m2) * (std::sin(xi) / (xi * xi) + std::cos(xi) / (xi * xi * xi)));
}

CouplingMatrices build_couplings(const ChainConfig& cfg) {
    const int n = cfg.n_atoms;
    CouplingMatrices cpl;
    cpl.gamma = Eigen::MatrixXd::Identity(n, n);
    cpl.omega = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double x = xi((j - i) * cfg.spacing_over_lambda);
            const double g = collective_decay(x);
            const double w = dipole_shift(x);
            cpl.gamma(i, j) = g;
            cpl.gamma(j, i) = g;
            cpl.omega(i, j) = w;
            cpl.omega(j, i) = w;
        }
    }
    return cpl;
}

} // namespace chaincorr
