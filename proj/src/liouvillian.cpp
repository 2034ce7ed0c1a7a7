#include "chaincorr/liouvillian.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace chaincorr {

namespace {

using namespace std::complex_literals;

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

} // namespace

Matrix lowering_operator(int n_atoms, int atom) {
    Matrix sm(2, 2);
    sm << 0, 1,
          0, 0;  // |g><e| in the (g, e) basis
    const Matrix id2 = Matrix::Identity(2, 2);
    Matrix op = Matrix::Identity(1, 1);
    for (int slot = 1; slot <= n_atoms; ++slot) {
        op = kron(op, slot == atom ? sm : id2);
    }
    return op;
}

Matrix raising_operator(int n_atoms, int atom) {
    return lowering_operator(n_atoms, atom).adjoint();
}

Matrix ground_state(int n_atoms) {
    const int dim = 1 << n_atoms;
    Matrix rho = Matrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    return rho;
}

Matrix build_hamiltonian(const ChainConfig& cfg, const CouplingMatrices& cpl) {
    const int n = cfg.n_atoms;
    const int dim = 1 << n;
    Matrix h = Matrix::Zero(dim, dim);

    const Matrix sp_l = raising_operator(n, cfg.driven_atom);
    h += cfg.rabi_over_gamma * (sp_l + sp_l.adjoint());

    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            const double w = cpl.omega(i - 1, j - 1);
            if (w == 0.0) continue;
            h += 2.0 * w * (raising_operator(n, i) * lowering_operator(n, j));
        }
    }
    return h;
}

Matrix build_generator(const Matrix& hamiltonian, const CouplingMatrices& cpl) {
    const Eigen::Index dim = hamiltonian.rows();
    const int n = static_cast<int>(cpl.gamma.rows());
    const Matrix id = Matrix::Identity(dim, dim);

    // vec(A rho B) = (B^T x A) vec(rho) under column stacking. Accumulate one
    // Kronecker term at a time; each is dim^2 x dim^2 and they add up fast at
    // six atoms.
    Matrix gen = kron(id, hamiltonian);
    gen -= kron(hamiltonian.transpose(), id);
    gen *= -1.0i;

    for (int i = 1; i <= n; ++i) {
        const Matrix sp_i = raising_operator(n, i);
        for (int j = 1; j <= n; ++j) {
            const double g = cpl.gamma(i - 1, j - 1);
            if (g == 0.0) continue;
            const Matrix sm_j = lowering_operator(n, j);
            const Matrix pop = sp_i * sm_j;
            gen += g * kron(sp_i.transpose(), sm_j);
            gen -= 0.5 * g * kron(id, pop);
            gen -= 0.5 * g * kron(pop.transpose(), id);
        }
    }
    return gen;
}

Vector vectorize(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v) {
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

SteadyState steady_state(const Matrix& generator, double residual_tol) {
    const Eigen::Index n2 = generator.rows();
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n2))));

    // Generator rows plus the trace functional as one extra constraint row.
    Matrix a(n2 + 1, n2);
    a.topRows(n2) = generator;
    a.row(n2).setZero();
    for (Eigen::Index i = 0; i < dim; ++i) {
        a(n2, i * dim + i) = 1.0;
    }
    Vector b = Vector::Zero(n2 + 1);
    b(n2) = 1.0;

    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    // rank(a) = rank(L) + 1: the trace row is independent of the row space of
    // a trace-preserving generator. Null-space dimension of L follows.
    const int kernel_dim = static_cast<int>(n2 + 1 - qr.rank());
    if (kernel_dim != 1) {
        throw solver_error("steady state not unique: generator null space has dimension " +
                               std::to_string(kernel_dim),
                           kernel_dim, std::numeric_limits<double>::quiet_NaN());
    }

    Vector x = qr.solve(b);
    for (int pass = 0; pass < 2; ++pass) {
        x += qr.solve((b - a * x).eval());
    }

    Matrix rho = unvectorize(x);
    rho = 0.5 * (rho + rho.adjoint().eval());

    const double gen_norm = generator.cwiseAbs().rowwise().sum().maxCoeff();
    const double residual = (generator * vectorize(rho)).lpNorm<Eigen::Infinity>() /
                            std::max(1.0, gen_norm);
    if (!(residual <= residual_tol)) {
        throw solver_error("steady-state residual " + std::to_string(residual) +
                               " exceeds tolerance " + std::to_string(residual_tol),
                           1, residual);
    }
    return SteadyState{std::move(rho), residual, 1};
}

Matrix evolve(const Matrix& rho0, const Matrix& generator, double t_final, double dt) {
    if (!(t_final > 0.0)) {
        throw integration_error("t_final must be positive");
    }
    if (!(dt > 0.0)) {
        throw integration_error("dt must be positive");
    }
    const Eigen::Index dim = rho0.rows();
    const double trace0 = rho0.trace().real();
    const double bound = 1e3 * std::max(1.0, rho0.cwiseAbs().maxCoeff());

    Vector v = vectorize(rho0);
    double t = 0.0;
    while (t < t_final - 1e-15) {
        const double h = std::min(dt, t_final - t);
        const Vector k1 = generator * v;
        const Vector k2 = generator * (v + 0.5 * h * k1).eval();
        const Vector k3 = generator * (v + 0.5 * h * k2).eval();
        const Vector k4 = generator * (v + h * k3).eval();
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;

        double trace = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            trace += v(i * dim + i).real();
        }
        // Trace is conserved exactly by explicit steps of a trace-preserving
        // generator, so blow-up shows first in the entry magnitudes.
        if (std::abs(trace - trace0) > 1e-6 || !std::isfinite(trace) ||
            v.cwiseAbs().maxCoeff() > bound) {
            throw integration_error(
                "unstable integration at t = " + std::to_string(t) +
                " (trace drift " + std::to_string(std::abs(trace - trace0)) +
                "); reduce dt (currently " + std::to_string(dt) + ")");
        }
    }
    return unvectorize(v);
}

DensityCheck check_density_matrix(const Matrix& rho) {
    DensityCheck check{};
    check.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    check.trace_error = std::abs(rho.trace() - std::complex<double>(1.0));
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    check.min_eigenvalue = es.eigenvalues().minCoeff();
    return check;
}

} // namespace chaincorr
