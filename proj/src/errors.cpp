#include "fpencil/errors.hpp"

namespace fpencil {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "not_symmetric";
    case ErrorKind::NotFinite: return "not_finite";
    case ErrorKind::NotPositiveDefinite: return "not_positive_definite";
    case ErrorKind::RankDeficient: return "rank_deficient";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::DegeneratePencil: return "degenerate_pencil";
    case ErrorKind::NumericalRankLoss: return "numerical_rank_loss";
    case ErrorKind::SpikeInvalidForTriple: return "spike_invalid_for_triple";
    case ErrorKind::NegativeVariance: return "negative_variance";
    case ErrorKind::InvalidTriple: return "invalid_triple";
    case ErrorKind::BracketFailure: return "bracket_failure";
    case ErrorKind::NoRootInBracket: return "no_root_in_bracket";
    case ErrorKind::OutOfRange: return "out_of_range";
    case ErrorKind::ConvergenceFailure: return "convergence_failure";
    case ErrorKind::IoError: return "io_error";
    case ErrorKind::UsageError: return "usage_error";
  }
  return "unknown";
}

}  // namespace fpencil
