#pragma once

#include <vector>

namespace fpencil::tw {

/// Tracy-Widom evaluation parameters: beta picks F1 (real) or F2 (complex),
/// the rest controls the Nystrom discretization of the Fredholm determinant.
struct TWParams {
  int beta = 1;
  int quadrature_nodes = 60;
  double domain_map_scale = 10.0;
};

/// Airy function of the first kind on [-20, 40]; absolute error below 1e-11
/// across the range. Throws OutOfRange outside it.
double airy_ai(double x);

/// Tracy-Widom CDF F_beta(s) for s in [-15, 10] via the Fredholm
/// determinant of the Airy kernel (beta = 2) or of Ai((x+y)/2)/2 (beta = 1)
/// on (s, infinity), Nystrom-discretized on a mapped semi-infinite interval.
double tw_cdf(double s, const TWParams& params = {});

/// Inverse CDF by bisection on tw_cdf to |F(s) - q| <= 1e-8,
/// for q in [1e-6, 1 - 1e-6].
double tw_quantile(double q, const TWParams& params = {});

/// Quantiles for an ascending list of probabilities. Builds one dense CDF
/// table and inverts a monotone cubic interpolant, so bulk evaluation does
/// not pay the per-call bisection price; agrees with tw_quantile to ~1e-8.
std::vector<double> tw_quantiles_bulk(const std::vector<double>& qs_ascending,
                                      const TWParams& params = {});

namespace detail {

struct AiryPair {
  double ai;
  double aip;
};

/// No range check; valid for any x (underflows to 0 far right).
AiryPair airy_both(double x);

/// The three evaluation mechanisms, exposed for the switchover
/// cross-check tests.
AiryPair airy_series(double x);
AiryPair airy_asymptotic_right(double x);
AiryPair airy_asymptotic_left(double x);

/// Series is used on [kLeftSwitch, kRightSwitch], the expansions beyond.
inline constexpr double kRightSwitch = 6.0;
inline constexpr double kLeftSwitch = -9.25;

}  // namespace detail

}  // namespace fpencil::tw
