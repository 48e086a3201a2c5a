#pragma once

#include <stdexcept>
#include <string>

namespace rirlab {

enum class ErrorCode {
  kInvalidArgument = 1,
  kGeometryInfeasible,
  kDegenerateRoom,
  kWindowTooShort,
  kBoundaryOrderViolation,
  kSampleRateMismatch,
  kEmptyRir,
  kInsufficientDecay,
  kDelayExceedsSignal,
  kCorpusUnavailable,
  kIndivisibleN,
  kSilentSignal,
  kLengthMismatch,
  kNonPositiveTruth,
  kTooFewSamples,
  kZeroVariance,
  kUnknownSampleId,
  kIo,
  kFormat,
};

const char* error_code_name(ErrorCode code);

// All failures in the core library surface as this exception; the C API
// translates the code into an rl_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace rirlab
