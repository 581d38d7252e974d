#include "firmrecon/error.hpp"

namespace firmrecon {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoopOnNonProxy: return "SelfLoopOnNonProxy";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::InvalidProxy: return "InvalidProxy";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::UnlabeledNode: return "UnlabeledNode";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::TargetExceedsEdges: return "TargetExceedsEdges";
    case ErrorCode::ZeroSectorDenominator: return "ZeroSectorDenominator";
    case ErrorCode::UnbalancedTotals: return "UnbalancedTotals";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InfeasibleSupport: return "InfeasibleSupport";
    case ErrorCode::InvalidConfidenceLevel: return "InvalidConfidenceLevel";
    case ErrorCode::ZeroTotalCost: return "ZeroTotalCost";
    case ErrorCode::ZeroTotalSales: return "ZeroTotalSales";
    case ErrorCode::DivergentSeries: return "DivergentSeries";
    case ErrorCode::NonStochasticColumns: return "NonStochasticColumns";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OverlappingPartition: return "OverlappingPartition";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EdgeSetMismatch: return "EdgeSetMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InsufficientTail: return "InsufficientTail";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::EmptySectorWindow: return "EmptySectorWindow";
    case ErrorCode::UncoveredSectorYear: return "UncoveredSectorYear";
    case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::InputUnreadable: return "InputUnreadable";
    case ErrorCode::OutputUnwritable: return "OutputUnwritable";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace firmrecon
