#include "fpencil/inference.hpp"

#include <algorithm>
#include <cmath>

#include "fpencil/errors.hpp"

namespace fpencil::inference {

TestResult standardize_root(double lambda1, const edge::DimensionTriple& triple,
                            froots::PencilPath path, double alpha,
                            const tw::TWParams& params) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "alpha must lie in (0, 1]");
  }
  if (!(lambda1 > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "lambda1 must be positive for the log statistic");
  }
  const edge::EdgeConstants ln = edge::log_constants(triple);

  TestResult out;
  out.lambda1 = lambda1;
  out.triple = triple;
  out.path = path;
  out.alpha = alpha;
  out.statistic = ln.scale * (std::log(lambda1) - ln.center);
  // The CDF is numerically 0 below -15 and 1 above 10; clamp before evaluating.
  const double s = std::clamp(out.statistic, -15.0, 10.0);
  out.p_value = 1.0 - tw::tw_cdf(s, params);
  out.reject = out.p_value < alpha;
  return out;
}

TestResult equality_test(const Matrix& z1, const Matrix& z2, double alpha,
                         const tw::TWParams& params) {
  // Y := Z2 carries the m-sample side, X := Z1 the n-sample side.
  const froots::FactorPair factors = froots::FactorPair::create(z2, z1);
  const froots::PencilResult root = froots::largest_root(factors);
  return standardize_root(root.lambda1, factors.triple, root.path, alpha, params);
}

}  // namespace fpencil::inference
