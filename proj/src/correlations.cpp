#include "chaincorr/correlations.hpp"

#include <cmath>

namespace chaincorr {

namespace {

using Complex = std::complex<double>;

int atoms_from_dim(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    return n;
}

Complex trace_product(const Matrix& a, const Matrix& b) {
    // tr(a b) without forming the product.
    return a.cwiseProduct(b.transpose()).sum();
}

// Scale used to decide whether an imaginary residual is significant: the sum
// of magnitudes bounds any phased sum of the same terms.
double correlation_scale(const AtomicCorrelations& corr, bool second) {
    double s = 0.0;
    if (second) {
        for (const auto& z : corr.second_order) s += std::abs(z);
    } else {
        s = corr.first_order.cwiseAbs().sum();
    }
    return s;
}

double take_real(Complex value, double scale, const char* what) {
    if (std::abs(value.imag()) > 1e-10 * std::max(scale, 1e-300)) {
        throw consistency_error(std::string(what) + ": imaginary residual " +
                                std::to_string(value.imag()) + " above tolerance");
    }
    return value.real();
}

} // namespace

AtomicCorrelations expectations(const Matrix& rho) {
    const int n = atoms_from_dim(rho.rows());
    AtomicCorrelations corr;
    corr.n_atoms = n;
    corr.first_order.resize(n, n);
    corr.second_order.assign(static_cast<std::size_t>(n) * n * n * n, Complex{0.0, 0.0});

    std::vector<Matrix> sp(n), sm(n);
    for (int i = 0; i < n; ++i) {
        sm[i] = lowering_operator(n, i + 1);
        sp[i] = sm[i].adjoint();
    }

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            corr.first_order(i, j) = trace_product(rho, sp[i] * sm[j]);
        }
    }

    // <S_i^+ S_j^+ S_k^- S_l^-> = tr(P_ij Q_kl rho); products with a repeated
    // raising or lowering index vanish on two-level atoms and stay zero.
    std::vector<Matrix> q_rho(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            if (k == l) continue;
            q_rho[static_cast<std::size_t>(k) * n + l] = sm[k] * sm[l] * rho;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const Matrix p = sp[i] * sp[j];
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    if (k == l) continue;
                    const auto idx = static_cast<std::size_t>(((i * n + j) * n + k) * n + l);
                    corr.second_order[idx] =
                        trace_product(p, q_rho[static_cast<std::size_t>(k) * n + l]);
                }
            }
        }
    }
    return corr;
}

PairCoherence pair_coherence(const AtomicCorrelations& corr, int i, int j) {
    const Complex z = corr.first(i, j);
    const double intensity = corr.population(i) + corr.population(j);
    PairCoherence pc;
    pc.defined = std::abs(z) >= 1e-15 && intensity > 0.0;
    if (!pc.defined) return pc;
    pc.v = 2.0 * std::abs(z) / intensity;
    pc.psi = std::arg(z);
    return pc;
}

double g1_angular(const AtomicCorrelations& corr, const ChainConfig& cfg, double theta) {
    const int n = corr.n_atoms;
    const double c = std::cos(theta);
    Complex sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const double phase =
                wavenumber * (atom_position(cfg, i) - atom_position(cfg, j)) * c;
            sum += corr.first(i, j) * std::polar(1.0, phase);
        }
    }
    return take_real(sum, correlation_scale(corr, false), "g1_angular");
}

double g2_angular(const AtomicCorrelations& corr, const ChainConfig& cfg,
                  double theta1, double theta2) {
    const int n = corr.n_atoms;
    const double c1 = std::cos(theta1);
    const double c2v = std::cos(theta2);
    Complex sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            for (int k = 1; k <= n; ++k) {
                for (int l = 1; l <= n; ++l) {
                    if (k == l) continue;
                    const double phase =
                        wavenumber *
                        ((atom_position(cfg, i) - atom_position(cfg, l)) * c1 +
                         (atom_position(cfg, j) - atom_position(cfg, k)) * c2v);
                    sum += corr.second(i, j, k, l) * std::polar(1.0, phase);
                }
            }
        }
    }
    return take_real(sum, correlation_scale(corr, true), "g2_angular");
}

std::optional<double> g2_normalized(const AtomicCorrelations& corr,
                                    const ChainConfig& cfg, double theta) {
    const double g1 = g1_angular(corr, cfg, theta);
    if (g1 * g1 < 1e-30) return std::nullopt;
    return g2_angular(corr, cfg, theta, theta) / (g1 * g1);
}

double c2(const AtomicCorrelations& corr, const ChainConfig& cfg, double theta) {
    const double g1 = g1_angular(corr, cfg, theta);
    return g2_angular(corr, cfg, theta, theta) - g1 * g1;
}

SecondOrderCoherences second_order_coherences(const AtomicCorrelations& corr) {
    SecondOrderCoherences out;
    const int n = corr.n_atoms;
    if (n < 2) return out;

    const double i12 = corr.population(1) + corr.population(2);
    if (i12 > 0.0) {
        out.eta_defined = true;
        out.eta = 4.0 * corr.second(1, 2, 1, 2).real() / (i12 * i12);
    }
    if (n != 3) return out;

    // Pair order {1,2}, {2,3}, {3,1}; see the header for the cross-coherence
    // assignment and sign convention.
    const double g12 = corr.second(1, 2, 1, 2).real();
    const double g23 = corr.second(2, 3, 2, 3).real();
    const double g31 = corr.second(3, 1, 3, 1).real();
    out.pair_signal[0] = g12;
    out.pair_signal[1] = g23;
    out.pair_signal[2] = g31;

    const Complex cross12 = corr.second(1, 3, 1, 2);  // {1,3} -> {1,2}
    const Complex cross23 = corr.second(2, 3, 1, 3);  // {2,3} -> {1,3}
    const Complex cross31 = corr.second(2, 3, 1, 2);  // {2,3} -> {1,2}

    const double den12 = g12 + g23;
    const double den23 = g23 + g31;
    const double den31 = g31 + g12;
    if (den12 <= 0.0 || den23 <= 0.0 || den31 <= 0.0) return out;

    out.sigma_defined = true;
    out.sigma[0] = 2.0 * std::abs(cross12) / den12;
    out.sigma[1] = 2.0 * std::abs(cross23) / den23;
    out.sigma[2] = 2.0 * std::abs(cross31) / den31;
    out.phi[0] = -std::arg(cross12);
    out.phi[1] = -std::arg(cross23);
    out.phi[2] = -std::arg(cross31);
    return out;
}

AngularScan scan_angles(const AtomicCorrelations& corr, const ChainConfig& cfg,
                        int points) {
    const int n = corr.n_atoms;
    AngularScan scan;
    scan.theta.resize(points);
    scan.g1_over_u.resize(points);
    scan.g2_over_u2.resize(points);
    scan.g2_norm.assign(points, 0.0);
    scan.g2_defined.assign(points, false);
    scan.c2.resize(points);

    const double scale1 = correlation_scale(corr, false);
    const double scale2 = correlation_scale(corr, true);

    std::vector<Complex> unit(n);
    for (int k = 0; k < points; ++k) {
        const double theta = 2.0 * M_PI * k / points;
        scan.theta[k] = theta;
        const double c = std::cos(theta);
        for (int i = 0; i < n; ++i) {
            unit[i] = std::polar(1.0, wavenumber * atom_position(cfg, i + 1) * c);
        }

        Complex sum1 = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                sum1 += corr.first_order(i, j) * unit[i] * std::conj(unit[j]);
            }
        }
        const double g1 = take_real(sum1, scale1, "scan g1");

        Complex sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const Complex up = unit[i] * unit[j];
                for (int kk = 0; kk < n; ++kk) {
                    for (int l = 0; l < n; ++l) {
                        if (kk == l) continue;
                        const auto idx =
                            static_cast<std::size_t>(((i * n + j) * n + kk) * n + l);
                        sum2 += corr.second_order[idx] * up * std::conj(unit[kk] * unit[l]);
                    }
                }
            }
        }
        const double g2 = take_real(sum2, scale2, "scan g2");

        scan.g1_over_u[k] = g1;
        scan.g2_over_u2[k] = g2;
        scan.c2[k] = g2 - g1 * g1;
        if (g1 * g1 >= 1e-30) {
            scan.g2_defined[k] = true;
            scan.g2_norm[k] = g2 / (g1 * g1);
        }
    }
    return scan;
}

} // namespace chaincorr
