#include "qzvalve/error.hpp"

namespace qzv {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Config: return "config";
    case ErrorCode::SectorTooLarge: return "sector-too-large";
    case ErrorCode::PropagationFailure: return "propagation-failure";
    case ErrorCode::ImpossibleOutcome: return "impossible-outcome";
    case ErrorCode::VanishingBranch: return "vanishing-branch";
    case ErrorCode::NotConverged: return "not-converged";
    case ErrorCode::DegenerateGroundState: return "degenerate-ground-state";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::NotApplicable: return "not-applicable";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::Io: return "io";
    case ErrorCode::TrajectoryFailed: return "trajectory-failed";
  }
  return "unknown";
}

}  // namespace qzv
