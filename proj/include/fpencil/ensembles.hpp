#pragma once

#include <cstdint>
#include <string>

#include "fpencil/edge.hpp"
#include "fpencil/matrix.hpp"

namespace fpencil::ensembles {

/// Standardized entry laws (mean 0, variance 1).
enum class EntryDistribution {
  gaussian,     // standard normal via inverse CDF
  three_point,  // +-sqrt(3) with prob 1/6 each, 0 with prob 2/3
  uniform,      // U(-sqrt(3), sqrt(3))
};

EntryDistribution parse_distribution(const std::string& name);
std::string to_string(EntryDistribution d);

/// Replicable stream address: identical (base, stream) gives bit-identical
/// output regardless of thread count.
struct Seed {
  std::uint64_t base = 0;
  std::uint64_t stream = 0;
};

/// Name of the pinned counter-based generator, embedded in --version.
inline constexpr const char* kRngAlgorithm = "splitmix64-counter";

/// Raw 64-bit draw for (seed, counter): SplitMix64 finalizer applied to
/// base ^ mix(stream) + counter * golden-gamma. Exposed for the golden
/// sample test that pins the algorithm.
std::uint64_t raw_draw(const Seed& seed, std::uint64_t counter);

/// Uniform in (0, 1), one counter per draw.
double uniform_draw(const Seed& seed, std::uint64_t counter);

/// Standard normal quantile (Wichura's AS241 rational approximation),
/// used so every entry consumes exactly one counter.
double normal_quantile(double u);

/// rows x cols matrix of i.i.d. entries from dist; entry (i, j) consumes
/// counter counter_offset + i*cols + j.
Matrix sample_matrix(EntryDistribution dist, std::size_t rows, std::size_t cols,
                     const Seed& seed, std::uint64_t counter_offset = 0);

/// Population covariance decorator for the power study.
struct SpikeSpec {
  enum class Kind { identity, rank_one, alternating };

  Kind kind = Kind::identity;
  double tau = 0.0;    // rank_one strength, in units of the critical spike
  double omega = 1.0;  // alternating diagonal value

  static SpikeSpec identity() { return {}; }
  static SpikeSpec rank_one(double tau);
  static SpikeSpec alternating(double omega);

  /// Parse "identity" | "rank1:tau=<v>" | "alt:omega=<v>".
  static SpikeSpec parse(const std::string& text);
  std::string to_string() const;

  /// r = sqrt(p/m + p/n - p^2/(mn)).
  double critical_r(const edge::DimensionTriple& t) const;
  /// theta = tau * (r - p/m) / (1 - p/m); requires p < m.
  double theta(const edge::DimensionTriple& t) const;

  /// Throws SpikeInvalidForTriple when the decorator is not defined for t.
  void validate(const edge::DimensionTriple& t) const;
};

/// Sigma^{1/2} X: rank_one scales the first row by sqrt(1 + theta),
/// alternating scales even-indexed rows (2nd, 4th, ...) by sqrt(omega),
/// identity returns X unchanged.
Matrix apply_sigma_half(const Matrix& x, const SpikeSpec& spike, const edge::DimensionTriple& t);

/// Full-Sigma variant (first row times 1 + theta, even rows times omega).
Matrix apply_sigma(const Matrix& x, const SpikeSpec& spike, const edge::DimensionTriple& t);

}  // namespace fpencil::ensembles
