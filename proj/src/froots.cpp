#include "fpencil/froots.hpp"

#include <cmath>
#include <string>

#include "fpencil/errors.hpp"
#include "fpencil/linalg.hpp"

namespace fpencil::froots {

namespace {

constexpr double kRankTol = 1e-12;
// Roots this small relative to lambda1 count as the zero cluster of a
// rank-deficient B side.
constexpr double kZeroRootTol = 1e-10;

void check_symmetric(const Matrix& s, const char* name) {
  const double scale = s.max_abs();
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = i + 1; j < s.cols(); ++j) {
      if (std::abs(s(i, j) - s(j, i)) > 1e-12 * (1.0 + scale)) {
        throw Error(ErrorKind::NotSymmetric, std::string(name) + " is not symmetric");
      }
    }
  }
}

std::vector<double> nonzero_roots(const std::vector<double>& values) {
  std::vector<double> out;
  const double top = values.empty() ? 0.0 : std::abs(values.front());
  for (double v : values) {
    if (v > kZeroRootTol * std::max(top, 1.0)) out.push_back(v);
  }
  return out;
}

// Top eigenvalue (and optionally the full spectrum) of L^{-1} B L^{-T} for
// the Cholesky factor L of A.
PencilResult invertible_path(const Matrix& a, const Matrix& b, bool want_all_roots) {
  const Matrix l = linalg::cholesky(a);
  const Matrix t = linalg::forward_solve_matrix(l, b);                 // L^{-1} B
  const Matrix c = linalg::forward_solve_matrix(l, t.transposed());    // L^{-1} B L^{-T}
  const linalg::SymEigen eig = linalg::sym_eigen(c);

  PencilResult out;
  out.lambda1 = eig.values.front();
  out.path = PencilPath::invertible;
  out.reduced_dim = static_cast<int>(a.rows());
  if (want_all_roots) out.all_nonzero_roots = nonzero_roots(eig.values);
  return out;
}

}  // namespace

FactorPair FactorPair::create(Matrix y, Matrix x) {
  if (y.rows() != x.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "Y has " + std::to_string(y.rows()) + " rows, X has " + std::to_string(x.rows()));
  }
  const int p = static_cast<int>(y.rows());
  const int m = static_cast<int>(y.cols());
  const int n = static_cast<int>(x.cols());
  if (p < 1 || m < 1 || n < 1) {
    throw Error(ErrorKind::DimensionMismatch, "factor matrices must be nonempty");
  }
  if (m + n <= p) {
    throw Error(ErrorKind::DegeneratePencil,
                "m + n must exceed p, got (" + std::to_string(p) + "," + std::to_string(m) + "," +
                    std::to_string(n) + ")");
  }
  y.check_finite("Y entries");
  x.check_finite("X entries");

  FactorPair pair;
  pair.triple = edge::DimensionTriple::create(p, m, n);
  pair.y = std::move(y);
  pair.x = std::move(x);
  return pair;
}

PencilResult largest_root(const FactorPair& factors, bool want_all_roots) {
  const auto& t = factors.triple;
  Matrix a = factors.y.gram();
  a *= 1.0 / t.m_breve;
  Matrix b = factors.x.gram();
  b *= 1.0 / t.n_breve;

  if (t.p <= t.m) {
    return invertible_path(a, b, want_all_roots);
  }

  // Singular A: spectral split of Y Y^T / m_breve, then the projection
  // reduction to the m x m matrix D^{-1/2} U1 X (I - P) X^T U1^T D^{-1/2}
  // with X scaled by 1/sqrt(n_breve).
  const int p = t.p;
  const int m = t.m;
  const linalg::SymEigen eig = linalg::sym_eigen(a);
  if (!(eig.values[m - 1] > kRankTol * std::max(eig.values[0], 0.0))) {
    throw Error(ErrorKind::NumericalRankLoss,
                "Y Y^T has numerical rank below m = " + std::to_string(m));
  }

  // Rows of U are the eigenvectors: U1 = top-m rows, U2 = the rest.
  Matrix u1(m, p);
  Matrix u2(p - m, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < m; ++j) u1(j, i) = eig.vectors(i, j);
    for (int j = m; j < p; ++j) u2(j - m, i) = eig.vectors(i, j);
  }

  const Matrix g = u1 * factors.x;             // m x n
  const Matrix w = (u2 * factors.x).transposed();  // n x (p - m)
  Matrix proj;
  try {
    proj = linalg::projection_complement(w);
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::RankDeficient) {
      throw Error(ErrorKind::NumericalRankLoss,
                  "U2 X X^T U2^T is numerically singular: " + err.detail());
    }
    throw;
  }

  Matrix reduced = (g * proj) * g.transposed();
  reduced *= 1.0 / t.n_breve;
  for (int i = 0; i < m; ++i) {
    const double di = 1.0 / std::sqrt(eig.values[i]);
    for (int j = 0; j < m; ++j) {
      const double dj = 1.0 / std::sqrt(eig.values[j]);
      reduced(i, j) *= di * dj;
    }
  }
  const linalg::SymEigen red_eig = linalg::sym_eigen(reduced);

  PencilResult out;
  out.lambda1 = red_eig.values.front();
  out.path = PencilPath::reduced;
  out.reduced_dim = m;
  if (want_all_roots) out.all_nonzero_roots = nonzero_roots(red_eig.values);
  return out;
}

PencilResult largest_root_matrices(const Matrix& a, const Matrix& b, bool want_all_roots) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "A and B must be square with equal dimension");
  }
  a.check_finite("A entries");
  b.check_finite("B entries");
  check_symmetric(a, "A");
  check_symmetric(b, "B");
  return invertible_path(a, b, want_all_roots);
}

double beta_transform(double lambda1) {
  if (!(lambda1 >= 0.0)) {
    throw Error(ErrorKind::OutOfRange, "beta_transform needs lambda1 >= 0");
  }
  return lambda1 / (1.0 + lambda1);
}

}  // namespace fpencil::froots
