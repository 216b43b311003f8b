#pragma once

#include "fpencil/edge.hpp"
#include "fpencil/froots.hpp"
#include "fpencil/matrix.hpp"
#include "fpencil/tw.hpp"

namespace fpencil::inference {

/// Outcome of the two-sample covariance-equality test.
struct TestResult {
  double lambda1 = 0.0;
  double statistic = 0.0;  // sigma_ln (ln lambda1 - mu_ln)
  double p_value = 1.0;    // one-sided upper tail, 1 - F1(statistic)
  bool reject = false;
  double alpha = 0.05;
  edge::DimensionTriple triple;
  froots::PencilPath path = froots::PencilPath::invertible;
};

/// Tests Sigma_1 = Sigma_2 from samples Z1 (p x n) and Z2 (p x m): largest
/// root of det(lambda Z2 Z2^T / m_breve - Z1 Z1^T / n_breve) = 0 on the log
/// scale against the Tracy-Widom F1 law. Rejects for large lambda1.
TestResult equality_test(const Matrix& z1, const Matrix& z2, double alpha,
                         const tw::TWParams& params = {});

/// The standardized statistic and p-value for a precomputed largest root.
TestResult standardize_root(double lambda1, const edge::DimensionTriple& triple,
                            froots::PencilPath path, double alpha,
                            const tw::TWParams& params = {});

}  // namespace fpencil::inference
