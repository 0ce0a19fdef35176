#pragma once

#include <cstdint>
#include <vector>

#include "ovib/model.hpp"

namespace ovib::tridiag {

// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
//
// The real overload is the classic orthogonal iteration. The complex overload
// runs the same recurrence with complex-orthogonal rotations (c^2 + s^2 = 1,
// c and s complex), which preserve the complex-symmetric tridiagonal form, so
// the whole spectrum costs O(n^2). Results are sorted ascending, complex ones
// by (Re, Im).
//
// Throws ConvergenceFailure with the index of the eigenvalue whose off-diagonal
// failed to deflate within the iteration cap.
std::vector<double> symql_eigenvalues(std::vector<double> diag, std::vector<double> sub);
std::vector<Complex> symql_eigenvalues(std::vector<Complex> diag, std::vector<Complex> sub);

// One eigenvector by shifted inverse iteration (tridiagonal LU with partial
// pivoting, deterministic pseudo-random start). Vectors in `cluster` are
// members of the same numerical eigenvalue cluster computed earlier; the
// iterate is re-orthogonalized against them each sweep -- with the Euclidean
// inner product for the real overload and the unconjugated bilinear form
// v^T w for the complex-symmetric one. Returned vector has unit 2-norm.
//
// `index_label` only decorates the ConvergenceFailure raised if the residual
// does not settle.
std::vector<double> inverse_eigenvector(const std::vector<double>& diag,
                                        const std::vector<double>& sub,
                                        double lambda, std::uint64_t seed,
                                        const std::vector<std::vector<double>>& cluster,
                                        std::size_t index_label = 0);
std::vector<Complex> inverse_eigenvector(const std::vector<Complex>& diag,
                                         const std::vector<Complex>& sub,
                                         Complex lambda, std::uint64_t seed,
                                         const std::vector<std::vector<Complex>>& cluster,
                                         std::size_t index_label = 0);

} // namespace ovib::tridiag
