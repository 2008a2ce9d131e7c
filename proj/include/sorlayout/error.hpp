#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sorlayout {

enum class ErrorCode {
  kEmptyConstraint,
  kDuplicatePriority,
  kInvalidPriority,
  kUnknownVariable,
  kUnknownConstraint,
  kLengthMismatch,
  kNoEligiblePivot,
  kInvalidConfig,
  kBelowMinimum,
  kInvalidArgument,
  kSingularDesign,
  kIoFailure,
  kBadFormat,
  kUnknownSession,
  kLimitExceeded,
  kBadRequest,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sorlayout
