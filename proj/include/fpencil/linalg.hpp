#pragma once

#include <vector>

#include "fpencil/matrix.hpp"

namespace fpencil::linalg {

/// Eigendecomposition of a real symmetric matrix: S = Q diag(values) Q^T,
/// values sorted descending, columns of `vectors` are the matching
/// eigenvectors.
struct SymEigen {
  std::vector<double> values;
  Matrix vectors;
};

/// Householder tridiagonalization followed by implicit-shift QL.
/// Requires S square, symmetric to 1e-12 relative, dim <= 2000.
SymEigen sym_eigen(const Matrix& s);

/// Lower-triangular L with S = L L^T. Throws NotPositiveDefinite with the
/// failing pivot index when a leading minor is not positive.
Matrix cholesky(const Matrix& s);

/// I - W (W^T W)^{-1} W^T for full-column-rank W (rank checked via Cholesky
/// of W^T W). Symmetric, idempotent, annihilates W, trace = n - k.
Matrix projection_complement(const Matrix& w);

/// Solve L x = b (L lower triangular) in place of the returned vector.
std::vector<double> forward_solve(const Matrix& l, const std::vector<double>& b);
/// Solve L^T x = b.
std::vector<double> backward_solve_t(const Matrix& l, const std::vector<double>& b);

/// L^{-1} B for lower-triangular L (column-wise forward substitution).
Matrix forward_solve_matrix(const Matrix& l, const Matrix& b);

}  // namespace fpencil::linalg
