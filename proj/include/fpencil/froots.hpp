#pragma once

#include <vector>

#include "fpencil/edge.hpp"
#include "fpencil/matrix.hpp"

namespace fpencil::froots {

enum class PencilPath { invertible, reduced };

/// Largest root of det(lambda A - B) = 0 and how it was obtained.
struct PencilResult {
  double lambda1 = 0.0;
  PencilPath path = PencilPath::invertible;
  int reduced_dim = 0;  // m on the reduced path, p otherwise
  std::vector<double> all_nonzero_roots;  // descending; filled on request
};

/// Unnormalized factors Y (p x m) and X (p x n) with unit-variance entries.
/// The pencil matrices are A = Y Y^T / m_breve and B = X X^T / n_breve.
struct FactorPair {
  Matrix y;
  Matrix x;
  edge::DimensionTriple triple;

  /// Infers (p, m, n) from the shapes; throws DimensionMismatch when the
  /// row counts disagree and DegeneratePencil when m + n <= p.
  static FactorPair create(Matrix y, Matrix x);
};

/// Largest root of det(lambda Y Y^T / m_breve - X X^T / n_breve) = 0.
/// For p <= m the pencil is reduced through the Cholesky factor of A;
/// for p > m it goes through the spectral split of Y Y^T and the
/// projection-complement reduction to an m-dimensional problem.
PencilResult largest_root(const FactorPair& factors, bool want_all_roots = false);

/// Direct-entry variant for symmetric psd matrices with invertible A.
PencilResult largest_root_matrices(const Matrix& a, const Matrix& b, bool want_all_roots = false);

/// lambda / (1 + lambda): the largest root of the companion pencil
/// det(lambda (A + B) - B) = 0 that is not part of the unit-root cluster.
double beta_transform(double lambda1);

}  // namespace fpencil::froots
