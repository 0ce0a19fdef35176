#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ovib/model.hpp"

namespace ovib::fock {

using ovib::SolveMode;

// Truncated phonon-basis size.
struct FockConfig {
    std::size_t n_max = 200;

    void validate() const {
        if (n_max < 2) throw std::invalid_argument("FockConfig: n_max must be >= 2");
    }
};

// Minimal dense complex matrix, row-major. Keeps the linear-algebra backend
// out of the public surface.
struct CMatrix {
    std::size_t n = 0;
    std::vector<Complex> a;

    CMatrix() = default;
    explicit CMatrix(std::size_t dim) : n(dim), a(dim * dim, Complex{}) {}

    Complex& operator()(std::size_t i, std::size_t j) noexcept { return a[i * n + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return a[i * n + j]; }
};

// exp(i eta X) in the truncated basis, where X is the tridiagonal position
// matrix X_{n,n+1} = sqrt(n+1)/sqrt(2). Computed by diagonalizing X and
// exponentiating its eigenvalues; unitary up to truncation in the low-index
// block.
CMatrix displacement_matrix(double eta, const FockConfig& cfg);

// Single d-mode Hamiltonian in the phonon basis.
//   full:      omega diag(0..n-1) - i gamma0 (I + s e^{i phi} conj(D(eta)))
//   hermitian: omega diag(0..n-1) + Hermitian part of the coupling,
//              which at phi = pi/2, branch + reduces to gamma0 (D + D^dag)/2.
// conj(D) carries the e^{-i eta x_d} orientation of the coupling, matching
// the real-space potential.
CMatrix build_fock_hamiltonian(const ModelParams& p, const FockConfig& cfg, SolveMode mode);

// Eigenvalues of a dense matrix, sorted by (Re, Im). `hermitian` selects the
// self-adjoint solver path (exactly real results).
std::vector<ComplexEnergy> dense_eigenvalues(const CMatrix& m, bool hermitian);

// Convenience: eigenvalues of the d-mode Hamiltonian, reported only up to
// index n_max/4 (higher ones are truncation-polluted).
std::vector<ComplexEnergy> fock_spectrum(const ModelParams& p, const FockConfig& cfg, SolveMode mode);

// Two-mode (s tensor d) Hamiltonian on the n_max^2 product basis; the coupling
// acts on the d factor only.
CMatrix build_two_mode_hamiltonian(const ModelParams& p, const FockConfig& cfg_small, SolveMode mode);

struct DecouplingReport {
    std::size_t compared = 0;    // lowest quarter of the two-mode spectrum
    double max_deviation = 0.0;  // vs the {m omega + E_d} multiset
    double tolerance = 0.0;
};

// Verifies that the two-mode eigenvalue multiset equals
// {m omega + E_d : m = 0..n_max-1, E_d in d-sector spectrum} on the lowest
// quarter of the spectrum. Throws DecouplingViolation on failure. The matrix
// overload lets a harness inject a corrupted coupling.
DecouplingReport smode_decoupling_check(const ModelParams& p, const FockConfig& cfg_small,
                                        SolveMode mode = SolveMode::full, double tol = 1e-6);
DecouplingReport smode_decoupling_check(const CMatrix& two_mode, const ModelParams& p,
                                        const FockConfig& cfg_small, SolveMode mode,
                                        double tol = 1e-6);

} // namespace ovib::fock
