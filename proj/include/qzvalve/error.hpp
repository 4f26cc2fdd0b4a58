#pragma once

#include <stdexcept>
#include <string>

namespace qzv {

enum class ErrorCode {
  InvalidArgument,
  Config,
  SectorTooLarge,
  PropagationFailure,
  ImpossibleOutcome,
  VanishingBranch,
  NotConverged,
  DegenerateGroundState,
  InsufficientData,
  NotApplicable,
  GridMismatch,
  Io,
  TrajectoryFailed,
};

const char* to_string(ErrorCode code) noexcept;

// All failures raised by the core library carry a machine-readable code; the
// C API maps them onto qzv_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace qzv
