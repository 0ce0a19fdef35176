#include "ovib/fock_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "ovib/errors.hpp"
#include "ovib/matching.hpp"

namespace ovib::fock {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXcd to_eigen(const CMatrix& m) {
    MatrixXcd out(static_cast<Index>(m.n), static_cast<Index>(m.n));
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = m(i, j);
    return out;
}

CMatrix from_eigen(const MatrixXcd& m) {
    CMatrix out(static_cast<std::size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    return out;
}

bool complex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

std::vector<ComplexEnergy> sorted_eigenvalues(const MatrixXcd& m, bool hermitian) {
    std::vector<ComplexEnergy> ev;
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw ConvergenceFailure(0, "dense_eigenvalues: self-adjoint solver failed");
        const VectorXd& v = solver.eigenvalues();
        ev.resize(static_cast<std::size_t>(v.size()));
        for (Index i = 0; i < v.size(); ++i) ev[static_cast<std::size_t>(i)] = Complex(v(i), 0.0);
    } else {
        Eigen::ComplexEigenSolver<MatrixXcd> solver(m, /*computeEigenvectors=*/false);
        if (solver.info() != Eigen::Success)
            throw ConvergenceFailure(0, "dense_eigenvalues: complex solver failed");
        const auto& v = solver.eigenvalues();
        ev.resize(static_cast<std::size_t>(v.size()));
        for (Index i = 0; i < v.size(); ++i) ev[static_cast<std::size_t>(i)] = v(i);
        std::sort(ev.begin(), ev.end(), complex_less);
    }
    return ev;
}

// coupling operator -i gamma0 (I + s e^{i phi} conj(D)) acting on the d mode
MatrixXcd coupling_operator(const ModelParams& p, const FockConfig& cfg) {
    const auto d = to_eigen(displacement_matrix(p.eta, cfg));
    const Complex front = Complex(0.0, -p.gamma0) * std::polar(1.0, p.phi) *
                          static_cast<double>(branch_sign(p.branch));
    MatrixXcd c = front * d.conjugate();
    c.diagonal().array() += Complex(0.0, -p.gamma0);
    return c;
}

MatrixXcd fock_hamiltonian_eigen(const ModelParams& p, const FockConfig& cfg, SolveMode mode) {
    p.validate();
    cfg.validate();
    const auto n = static_cast<Index>(cfg.n_max);
    MatrixXcd h = coupling_operator(p, cfg);
    if (mode == SolveMode::hermitian) {
        // (C + C^dag)/2; the uniform -i gamma0 I loss cancels in the projection.
        // Enforce Hermiticity structurally, not just numerically.
        h = 0.5 * (h + h.adjoint()).eval();
        for (Index i = 0; i < n; ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j) h(j, i) = std::conj(h(i, j));
    }
    for (Index i = 0; i < n; ++i) h(i, i) += p.omega * static_cast<double>(i);
    return h;
}

} // namespace

CMatrix displacement_matrix(double eta, const FockConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<Index>(cfg.n_max);

    VectorXd diag = VectorXd::Zero(n);
    VectorXd sub(n - 1);
    for (Index i = 0; i + 1 < n; ++i) sub(i) = std::sqrt(0.5 * static_cast<double>(i + 1));

    Eigen::SelfAdjointEigenSolver<MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure(0, "displacement_matrix: position-operator diagonalization failed");

    const MatrixXd& q = solver.eigenvectors();
    const VectorXd& x = solver.eigenvalues();
    Eigen::VectorXcd phase(n);
    for (Index i = 0; i < n; ++i) phase(i) = std::polar(1.0, eta * x(i));
    const MatrixXcd d = q.cast<Complex>() * phase.asDiagonal() * q.transpose().cast<Complex>();
    return from_eigen(d);
}

CMatrix build_fock_hamiltonian(const ModelParams& p, const FockConfig& cfg, SolveMode mode) {
    return from_eigen(fock_hamiltonian_eigen(p, cfg, mode));
}

std::vector<ComplexEnergy> dense_eigenvalues(const CMatrix& m, bool hermitian) {
    return sorted_eigenvalues(to_eigen(m), hermitian);
}

std::vector<ComplexEnergy> fock_spectrum(const ModelParams& p, const FockConfig& cfg, SolveMode mode) {
    auto ev = sorted_eigenvalues(fock_hamiltonian_eigen(p, cfg, mode), mode == SolveMode::hermitian);
    ev.resize(std::max<std::size_t>(1, cfg.n_max / 4));
    return ev;
}

CMatrix build_two_mode_hamiltonian(const ModelParams& p, const FockConfig& cfg_small, SolveMode mode) {
    p.validate();
    cfg_small.validate();
    if (cfg_small.n_max > 30)
        throw std::invalid_argument("build_two_mode_hamiltonian: n_max > 30 (tensor dimension n_max^2)");

    const std::size_t n = cfg_small.n_max;
    const MatrixXcd hd = fock_hamiltonian_eigen(p, cfg_small, mode); // d-sector, incl. coupling
    CMatrix out(n * n);
    // basis index (m_s, m_d) -> m_s * n + m_d; H = omega n_s (x) I + I (x) H_d
    for (std::size_t ms = 0; ms < n; ++ms)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Complex v = hd(static_cast<Index>(i), static_cast<Index>(j));
                if (i == j) v += p.omega * static_cast<double>(ms);
                out(ms * n + i, ms * n + j) = v;
            }
    return out;
}

DecouplingReport smode_decoupling_check(const ModelParams& p, const FockConfig& cfg_small,
                                        SolveMode mode, double tol) {
    return smode_decoupling_check(build_two_mode_hamiltonian(p, cfg_small, mode), p, cfg_small, mode,
                                  tol);
}

DecouplingReport smode_decoupling_check(const CMatrix& two_mode, const ModelParams& p,
                                        const FockConfig& cfg_small, SolveMode mode, double tol) {
    const std::size_t n = cfg_small.n_max;
    if (two_mode.n != n * n)
        throw std::invalid_argument("smode_decoupling_check: matrix dimension must be n_max^2");

    const bool herm = mode == SolveMode::hermitian;
    auto actual = dense_eigenvalues(two_mode, herm);

    const auto d_sector =
        sorted_eigenvalues(fock_hamiltonian_eigen(p, cfg_small, mode), herm);
    std::vector<ComplexEnergy> expected;
    expected.reserve(n * n);
    for (std::size_t m = 0; m < n; ++m)
        for (const auto& ed : d_sector) expected.push_back(p.omega * static_cast<double>(m) + ed);
    std::sort(expected.begin(), expected.end(), complex_less);

    DecouplingReport rep;
    rep.compared = (n * n) / 4;
    rep.tolerance = tol * p.omega;
    rep.max_deviation = matched_deviation(actual, expected, rep.compared, rep.compared + 2 * n);

    if (rep.max_deviation > rep.tolerance)
        throw DecouplingViolation(rep.max_deviation,
                                  "smode_decoupling_check: two-mode spectrum deviates from "
                                  "{m omega + E_d} by " +
                                      std::to_string(rep.max_deviation) + " omega (tol " +
                                      std::to_string(rep.tolerance) + ")");
    return rep;
}

} // namespace ovib::fock
