#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace firmrecon {

enum class ErrorCode {
  // net-core
  DuplicateEdge,
  SelfLoopOnNonProxy,
  IndexOutOfRange,
  NonPositiveWeight,
  InvalidProxy,
  SizeMismatch,
  // synth / sampling
  InfeasibleConfig,
  UnlabeledNode,
  EmptySelection,
  TargetExceedsEdges,
  ZeroSectorDenominator,
  // recon
  UnbalancedTotals,
  NonConvergence,
  InfeasibleSupport,
  InvalidConfidenceLevel,
  // coeffs
  ZeroTotalCost,
  ZeroTotalSales,
  DivergentSeries,
  NonStochasticColumns,
  // shocks / metrics
  InvalidArgument,
  OverlappingPartition,
  DegenerateRange,
  ZeroVector,
  EdgeSetMismatch,
  EmptyInput,
  InsufficientTail,
  // harmonize
  ZeroDenominator,
  EmptySectorWindow,
  UncoveredSectorYear,
  RatioOutOfRange,
  // config / io
  UnknownKey,
  TypeError,
  RangeError,
  InputUnreadable,
  OutputUnwritable,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace firmrecon
