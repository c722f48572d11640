#include "gugt/error.hpp"

namespace gugt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::WrongJointCount: return "WrongJointCount";
    case ErrorCode::EmptySession: return "EmptySession";
    case ErrorCode::InsufficientTracking: return "InsufficientTracking";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::NoSteps: return "NoSteps";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::TooFewDistinctPoints: return "TooFewDistinctPoints";
    case ErrorCode::EmptyStream: return "EmptyStream";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::SingleClassTraining: return "SingleClassTraining";
    case ErrorCode::TooFewSubjects: return "TooFewSubjects";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(detail), code_(code) {}

}  // namespace gugt
