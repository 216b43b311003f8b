#include "fpencil/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fpencil/errors.hpp"

namespace fpencil::linalg {

namespace {

constexpr std::size_t kMaxEigenDim = 2000;
constexpr double kDeflationEps = 1e-14;

double hypot2(double a, double b) { return std::hypot(a, b); }

// Householder reduction to symmetric tridiagonal form, accumulating the
// orthogonal transformation in v. Classic EISPACK tred2 ordering: on exit
// d holds the diagonal, e[1..n-1] the subdiagonal, v the accumulated Q.
void tridiagonalize(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0.0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) v(k, j) -= f * e[k] + g * d[k];
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate transformations.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL iteration on the tridiagonal (d, e), updating the
// eigenvector accumulator v. Deflation when the off-diagonal is negligible
// against its two neighbouring diagonal entries.
void ql_implicit(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kDeflationEps * dd) break;
      }
      if (m != l) {
        if (++iter > 64) {
          throw Error(ErrorKind::ConvergenceFailure,
                      "QL iteration exceeded 64 sweeps at index " + std::to_string(l));
        }
        // Wilkinson shift.
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow_restart = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow_restart = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * f;
            v(k, i) = c * v(k, i) - s * f;
          }
        }
        if (underflow_restart) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

SymEigen sym_eigen(const Matrix& s) {
  const std::size_t n = s.rows();
  if (n == 0 || s.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "sym_eigen needs a nonempty square matrix, got " + std::to_string(s.rows()) +
                    "x" + std::to_string(s.cols()));
  }
  if (n > kMaxEigenDim) {
    throw Error(ErrorKind::DimensionMismatch,
                "sym_eigen dimension " + std::to_string(n) + " exceeds 2000");
  }
  s.check_finite("sym_eigen input");

  const double scale = s.max_abs();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s(i, j) - s(j, i)) > 1e-12 * (1.0 + scale)) {
        throw Error(ErrorKind::NotSymmetric,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") differs from its transpose");
      }
    }
  }

  // Work on the symmetrized matrix to remove roundoff asymmetry.
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = 0.5 * (s(i, j) + s(j, i));

  std::vector<double> d(n), e(n);
  if (n == 1) {
    d[0] = v(0, 0);
    v(0, 0) = 1.0;
  } else {
    tridiagonalize(v, d, e);
    ql_implicit(v, d, e);
  }

  // Sort descending, permuting eigenvector columns alongside.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

  SymEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

Matrix cholesky(const Matrix& s) {
  const std::size_t n = s.rows();
  if (n == 0 || s.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "cholesky needs a nonempty square matrix");
  }
  s.check_finite("cholesky input");

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = s(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "pivot " + std::to_string(j) + " is not positive");
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = 0.5 * (s(i, j) + s(j, i));
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

Matrix projection_complement(const Matrix& w) {
  const std::size_t n = w.rows();
  const std::size_t k = w.cols();
  if (n == 0 || k == 0 || k > n) {
    throw Error(ErrorKind::DimensionMismatch,
                "projection_complement needs an n x k matrix with 1 <= k <= n");
  }
  w.check_finite("projection_complement input");

  const Matrix g = multiply_at(w, w);  // W^T W, k x k
  Matrix l;
  try {
    l = cholesky(g);
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::NotPositiveDefinite) {
      throw Error(ErrorKind::RankDeficient, "W^T W is singular: " + err.detail());
    }
    throw;
  }

  // P = I - T^T T with T = L^{-1} W^T, so W (W^T W)^{-1} W^T = T^T T.
  const Matrix t = forward_solve_matrix(l, w.transposed());
  Matrix p = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < k; ++r) s += t(r, i) * t(r, j);
      p(i, j) -= s;
      if (j != i) p(j, i) = p(i, j);
    }
  }
  return p;
}

std::vector<double> forward_solve(const Matrix& l, const std::vector<double>& b) {
  const std::size_t n = l.rows();
  std::vector<double> x(b);
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

std::vector<double> backward_solve_t(const Matrix& l, const std::vector<double>& b) {
  const std::size_t n = l.rows();
  std::vector<double> x(b);
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

Matrix forward_solve_matrix(const Matrix& l, const Matrix& b) {
  const std::size_t n = l.rows();
  if (b.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "forward_solve_matrix shapes");
  }
  Matrix x = b;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = l(i, k);
      if (lik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) -= lik * x(k, j);
    }
    const double d = l(i, i);
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) /= d;
  }
  return x;
}

}  // namespace fpencil::linalg
