#pragma once

#include <cstddef>

#include "qzvalve/trajectory.hpp"

namespace qzv {

// Krylov trajectory versus a replay with dense eigendecomposition
// propagation. The replay applies the same measurement outcomes, so only
// the propagators and the entropy routes differ.
struct OracleDeviation {
  std::size_t dim = 0;
  std::size_t samples = 0;
  double max_infidelity = 0.0;      // 1 - |<psi_krylov|psi_dense>|^2
  double max_entropy_method = 0.0;  // blockwise vs full partial trace, same state
  double max_entropy_path = 0.0;    // blockwise on Krylov vs full trace on dense
  double max_density = 0.0;
};

// Throws SectorTooLarge above kDenseOracleMaxDim.
OracleDeviation dense_oracle_check(const ProtocolConfig& config, std::size_t index = 0);

// Largest deviation of chain densities and entropy between a trajectory and
// the chain-only reference. Meaningful for M = 0.
struct ReferenceDeviation {
  double max_density = 0.0;
  double max_entropy = 0.0;
};

ReferenceDeviation chain_reference_check(const ProtocolConfig& config,
                                         const TrajectoryResult& trajectory);

}  // namespace qzv
