#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ovib/grid.hpp"
#include "ovib/model.hpp"

namespace ovib::fd {

using ovib::SolveMode;

// Tridiagonal discretization of H = (omega/2)(-d^2/dx^2 - 1) - i gamma0 + V(x)
// with implicit Dirichlet walls. Complex symmetric: equal upper and lower
// off-diagonals, and the off-diagonal is the real constant -omega/(2 h^2).
struct HamiltonianMatrix {
    Grid grid;
    ModelParams params;
    SolveMode mode = SolveMode::hermitian;
    std::vector<Complex> diagonal;
    double off_diagonal = 0.0;

    std::size_t dimension() const noexcept { return diagonal.size(); }
    bool is_hermitian() const noexcept { return mode == SolveMode::hermitian; }
};

// Assembles the matrix. Hermitian mode uses Re V and drops the uniform
// -i gamma0 loss; full mode keeps both. Pass the top of the spectral window
// you intend to trust to get the soft-wall containment check.
HamiltonianMatrix build_hamiltonian(const Grid& grid, const ModelParams& p, SolveMode mode,
                                    std::optional<double> e_max_requested = std::nullopt);

struct SpectrumResult {
    ModelParams params;
    Grid grid;
    SolveMode mode = SolveMode::hermitian;
    std::vector<ComplexEnergy> eigenvalues;          // k lowest by (Re, Im)
    std::vector<std::vector<Complex>> eigenvectors;  // one per eigenvalue, sum |psi|^2 h = 1

    std::size_t size() const noexcept { return eigenvalues.size(); }
};

// All eigenvalues of the assembled matrix, sorted by (Re, Im). Hermitian-mode
// values are exactly real (real solver path).
std::vector<ComplexEnergy> solve_eigenvalues(const HamiltonianMatrix& h);

// The k eigenpairs of smallest real part. Eigenvectors are normalized to
// sum |psi_i|^2 h = 1 and rotated so their largest-modulus component is real
// positive. Numerically coincident eigenvalues are ordered by Im, then by
// eigenvector centroid.
SpectrumResult solve_spectrum(const HamiltonianMatrix& h, std::size_t k);

// ---------------------------------------------------------------- refinement

struct ConvergenceRow {
    std::size_t index = 0;
    ComplexEnergy coarse{}, medium{}, fine{};
    ComplexEnergy extrapolated{};   // Richardson from (medium, fine)
    double richardson_error = 0.0;  // error estimate of `extrapolated`: |fine - medium| / 12
    double order_ratio = 0.0;       // |medium - coarse| / |fine - medium|, ~4 for O(h^2)
    double domain_shift = 0.0;      // |E(x_max + 2) - E(x_max)| at the base spacing
    bool converged = false;         // richardson_error < 1e-4 omega
    bool domain_ok = false;         // domain_shift < 1e-8 omega
    bool wall_contained = false;    // wall height >= Re E + 5 omega
};

struct ConvergenceReport {
    ModelParams params;
    Grid base;
    SolveMode mode = SolveMode::hermitian;
    std::vector<ConvergenceRow> rows;

    bool all_converged() const noexcept {
        for (const auto& r : rows)
            if (!r.converged) return false;
        return true;
    }
};

// Re-solves the lowest k eigenvalues on (h, h/2, h/4) and on a domain enlarged
// by 2, and reports Richardson error estimates. Report-only: containment and
// convergence problems are flagged, not thrown.
ConvergenceReport convergence_study(const ModelParams& p, SolveMode mode, std::size_t k,
                                    const Grid& base = Grid::reference());

// Richardson-extrapolated lowest-k eigenvalues from (h, h/2); this is what the
// artifact reports as converged energies when tolerances are tighter than the
// raw O(h^2) truncation error.
std::vector<ComplexEnergy> refined_eigenvalues(const ModelParams& p, SolveMode mode, std::size_t k,
                                               const Grid& base = Grid::reference());

} // namespace ovib::fd
