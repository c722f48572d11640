#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gugt {

enum class ErrorCode {
  MalformedRecord,
  NonMonotonicTimestamp,
  WrongJointCount,
  EmptySession,
  InsufficientTracking,
  DegenerateRange,
  NoSteps,
  ZeroVector,
  TooFewPoints,
  TooFewDistinctPoints,
  EmptyStream,
  DimensionMismatch,
  EmptyTrainingSet,
  SingleClassTraining,
  TooFewSubjects,
  InvalidProfile,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

// All pipeline failures are reported through this type; the code is the
// stable, machine-readable part and what() carries the human detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gugt
