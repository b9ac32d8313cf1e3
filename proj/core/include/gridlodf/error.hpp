#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gridlodf {

enum class ErrorCode {
  kParse,
  kDuplicateBus,
  kUnknownBus,
  kSelfLoop,
  kNonpositiveReactance,
  kInconsistentSusceptance,
  kNoSlack,
  kMultipleSlack,
  kTooFewBuses,
  kDisconnected,
  kUnbalancedInjection,
  kSingularReduced,
  kSlackExcluded,
  kCutSet,
  kSingularOutage,
  kDualFormMismatch,
  kOverLimit,
  kInvalidPartition,
  kSameEdge,
  kBadAlpha,
  kUseCutsetOp,
  kInvalidIsland,
  kInvalidArgument,
};

// Stable upper-case identifier, e.g. "DUPLICATE_BUS".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Malformed case text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace gridlodf
