#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fpencil {

// Every failure the library can raise, mapped 1:1 onto the error kinds the
// CLI reports as {"error_kind": ..., "detail": ...}.
enum class ErrorKind {
  NotSymmetric,
  NotFinite,
  NotPositiveDefinite,
  RankDeficient,
  DimensionMismatch,
  DegeneratePencil,
  NumericalRankLoss,
  SpikeInvalidForTriple,
  NegativeVariance,
  InvalidTriple,
  BracketFailure,
  NoRootInBracket,
  OutOfRange,
  ConvergenceFailure,
  IoError,
  UsageError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace fpencil
