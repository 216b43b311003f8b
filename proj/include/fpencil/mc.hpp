#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fpencil/edge.hpp"
#include "fpencil/ensembles.hpp"
#include "fpencil/tw.hpp"

namespace fpencil::mc {

/// The nine standard TW1 percentile points used by the coverage tables.
inline constexpr std::array<double, 9> kPercentiles = {-3.9, -3.18, -2.78, -1.91, -1.27,
                                                       -0.59, 0.45,  0.98,  2.02};
inline constexpr std::array<double, 9> kNominal = {0.01, 0.05, 0.1, 0.3, 0.5,
                                                   0.7,  0.9,  0.95, 0.99};

enum class SimMode { null_coverage, power, qq };

/// Whether the power-mode alternative applies Sigma^{1/2} or Sigma itself
/// to the X sample.
enum class SigmaConvention { sqrt_matrix, full_matrix };

struct SimulationConfig {
  edge::DimensionTriple triple;
  ensembles::EntryDistribution dist = ensembles::EntryDistribution::gaussian;
  ensembles::SpikeSpec spike;  // identity outside power mode
  int reps = 2000;
  double alpha = 0.05;  // power mode rejection level
  std::uint64_t base_seed = 0;
  SimMode mode = SimMode::null_coverage;
  int threads = 0;  // <= 0 means hardware concurrency
  SigmaConvention sigma_convention = SigmaConvention::sqrt_matrix;
  tw::TWParams tw_params;
};

struct CoverageRow {
  double percentile = 0.0;
  double tw = 0.0;         // nominal F1 mass at the percentile
  double empirical = 0.0;  // fraction of statistics <= percentile
  double se2 = 0.0;        // 2 sqrt(tw (1-tw) / reps)
};

struct SimulationReport {
  SimulationConfig config;
  std::vector<CoverageRow> coverage;  // null_coverage mode
  double power = 0.0;                 // power mode
  double threshold = 0.0;             // power mode rejection threshold on the statistic
  double elapsed_ms = 0.0;

  /// Deterministic JSON serialization; wall time is only emitted when
  /// requested so identical runs stay byte-identical.
  std::string to_json(bool include_timing = false) const;
};

struct QQRow {
  int rank = 0;
  double statistic = 0.0;    // sorted ascending
  double theoretical = 0.0;  // F1^{-1}((rank - 1/2) / reps)
};

/// Empirical distribution of the standardized log statistic at the nine
/// TW percentiles under the null. Deterministic in base_seed for any
/// thread count.
SimulationReport run_null_coverage(const SimulationConfig& cfg);

/// Rejection fraction at level alpha under the spiked alternative.
SimulationReport run_power(const SimulationConfig& cfg);

/// Sorted standardized statistics paired with theoretical TW quantiles.
std::vector<QQRow> qq_data(const SimulationConfig& cfg);

std::string qq_csv(const std::vector<QQRow>& rows);

}  // namespace fpencil::mc
