#include "gridlodf/error.hpp"

namespace gridlodf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "PARSE";
    case ErrorCode::kDuplicateBus: return "DUPLICATE_BUS";
    case ErrorCode::kUnknownBus: return "UNKNOWN_BUS";
    case ErrorCode::kSelfLoop: return "SELF_LOOP";
    case ErrorCode::kNonpositiveReactance: return "NONPOSITIVE_REACTANCE";
    case ErrorCode::kInconsistentSusceptance: return "INCONSISTENT_SUSCEPTANCE";
    case ErrorCode::kNoSlack: return "NO_SLACK";
    case ErrorCode::kMultipleSlack: return "MULTIPLE_SLACK";
    case ErrorCode::kTooFewBuses: return "TOO_FEW_BUSES";
    case ErrorCode::kDisconnected: return "DISCONNECTED";
    case ErrorCode::kUnbalancedInjection: return "UNBALANCED_INJECTION";
    case ErrorCode::kSingularReduced: return "SINGULAR_REDUCED";
    case ErrorCode::kSlackExcluded: return "SLACK_EXCLUDED";
    case ErrorCode::kCutSet: return "CUT_SET";
    case ErrorCode::kSingularOutage: return "SINGULAR_OUTAGE";
    case ErrorCode::kDualFormMismatch: return "DUAL_FORM_MISMATCH";
    case ErrorCode::kOverLimit: return "OVER_LIMIT";
    case ErrorCode::kInvalidPartition: return "INVALID_PARTITION";
    case ErrorCode::kSameEdge: return "SAME_EDGE";
    case ErrorCode::kBadAlpha: return "BAD_ALPHA";
    case ErrorCode::kUseCutsetOp: return "USE_CUTSET_OP";
    case ErrorCode::kInvalidIsland: return "INVALID_ISLAND";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(ErrorCode::kParse,
            message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

}  // namespace gridlodf
