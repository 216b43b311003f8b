#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace fpencil::edge {

/// Problem dimensions (p, m, n) together with the role-standardized
/// "breve" dimensions that let one formula cover both the invertible
/// (p < m) and singular (p > m) regimes:
///   m_breve = max(m, p), n_breve = min(n, m+n-p), p_breve = min(m, p).
struct DimensionTriple {
  int p = 0;
  int m = 0;
  int n = 0;
  int p_breve = 0;
  int m_breve = 0;
  int n_breve = 0;
  double d1 = 0.0;  // p/m
  double d2 = 0.0;  // p/n

  /// Validates p, m, n >= 1 and m + n > p; throws InvalidTriple otherwise.
  static DimensionTriple create(int p, int m, int n);

  /// Scaled triple (k*p, k*m, k*n).
  DimensionTriple scaled(int k) const { return create(p * k, m * k, n * k); }
};

enum class ConstantForm {
  johnstone,
  section5,
  integral,
  discrete,
  empirical,
  log_scale,
};

/// A (center, scale) pair with its provenance and the auxiliary quantities
/// of that form (fixed point c and/or stored angles).
struct EdgeConstants {
  double center = 0.0;  // mu
  double scale = 0.0;   // sigma
  ConstantForm form = ConstantForm::johnstone;
  double c = std::nan("");       // fixed point (integral/discrete/empirical)
  double gamma = std::nan("");   // johnstone angle
  double psi = std::nan("");     // johnstone angle
  double alpha = std::nan("");   // section5 angle
  double beta = std::nan("");    // section5 angle
};

/// Square-root law on [a, b] with finite-sample ratio p_breve/m_breve:
/// density(x) = sqrt((b-x)(x-a)) / (2 pi x ratio) on [a, b], 0 outside.
struct MPLaw {
  double ratio = 0.0;
  double a = 0.0;
  double b = 0.0;

  static MPLaw from(const DimensionTriple& t);

  double density(double x) const;

  /// Integral of f against the density over [a, b]. The substitution
  /// x = (a+b)/2 + (b-a)/2 sin t removes the square-root edge behaviour;
  /// the smooth t-integrand then gets 200-node Gauss-Legendre.
  double integrate(const std::function<double(double)>& f) const;

  /// Integral of f against the density over [x0, b].
  double integrate_tail(double x0, const std::function<double(double)>& f) const;

  /// Mass of [x0, b].
  double tail_mass(double x0) const;
};

/// Deterministic quantile-type locations gamma_1 >= ... >= gamma_{p_breve}
/// of the MP law: tail mass above gamma_j equals j/p_breve.
struct TypicalLocations {
  std::vector<double> gamma;
};

EdgeConstants johnstone_constants(const DimensionTriple& t);
EdgeConstants section5_constants(const DimensionTriple& t);

/// Closed-form fixed point: the rational-surd expression (breve roles), or
/// (m-p)^2 / (2(m+p)m) when the breve n equals the breve p.
double c_closed_form(const DimensionTriple& t);
/// Fixed point of the quadrature equation: bracketed bisection then Newton
/// polish to |residual| <= 1e-12.
double c_fixed_point(const DimensionTriple& t);

/// Integral-form center/scale evaluated at the closed-form fixed point.
EdgeConstants integral_constants(const DimensionTriple& t);
/// Same, at a caller-supplied fixed point (e.g. from c_fixed_point).
EdgeConstants integral_constants_at(const DimensionTriple& t, double c);

TypicalLocations typical_locations(const DimensionTriple& t);

EdgeConstants discrete_constants(const DimensionTriple& t);
EdgeConstants discrete_constants_at(const DimensionTriple& t, const TypicalLocations& loc);

/// Plug-in constants from an observed spectrum (descending, positive) and
/// an effective sample count.
EdgeConstants empirical_constants(const std::vector<double>& eigs, int n_eff);

/// Log-scale centering for ln(lambda1): center ln(m_breve/n_breve * mu_J),
/// scale mu_J / sigma_J.
EdgeConstants log_constants(const DimensionTriple& t);

}  // namespace fpencil::edge
