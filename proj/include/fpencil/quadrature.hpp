#pragma once

#include <cstddef>
#include <vector>

namespace fpencil::quadrature {

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;  // matching weights, sum = 2
};

/// Gauss-Legendre rule of order n (Newton iteration on P_n). Results are
/// cached per n behind a mutex; returned references stay valid for the
/// program lifetime.
const GaussLegendre& gauss_legendre(std::size_t n);

}  // namespace fpencil::quadrature
