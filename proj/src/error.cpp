#include "error.hpp"

namespace rirlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kGeometryInfeasible: return "GeometryInfeasible";
    case ErrorCode::kDegenerateRoom: return "DegenerateRoom";
    case ErrorCode::kWindowTooShort: return "WindowTooShort";
    case ErrorCode::kBoundaryOrderViolation: return "BoundaryOrderViolation";
    case ErrorCode::kSampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::kEmptyRir: return "EmptyRIR";
    case ErrorCode::kInsufficientDecay: return "InsufficientDecay";
    case ErrorCode::kDelayExceedsSignal: return "DelayExceedsSignal";
    case ErrorCode::kCorpusUnavailable: return "CorpusUnavailable";
    case ErrorCode::kIndivisibleN: return "IndivisibleN";
    case ErrorCode::kSilentSignal: return "SilentSignal";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNonPositiveTruth: return "NonPositiveTruth";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kUnknownSampleId: return "UnknownSampleId";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kFormat: return "Format";
  }
  return "Unknown";
}

}  // namespace rirlab
