#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qzvalve/hilbert.hpp"
#include "qzvalve/state.hpp"

namespace qzv {

enum class ProjectionMode { Hard, Soft };

const char* to_string(ProjectionMode mode) noexcept;

// Imaginary-potential projection parameters; defaults are the reference
// values A = 3e8, eta = 1e-6 in 10 substeps.
struct SoftProjectionParams {
  double strength = 3e8;
  double eta = 1e-6;
  int substeps = 10;
};

struct MeasurementRecord {
  double time = 0.0;
  int ancilla = 0;
  double p1 = 0.0;  // Born probability of finding the lower site occupied
  int outcome = 0;
  double pre_projection_na = 0.0;
  ProjectionMode mode = ProjectionMode::Hard;
};

// Per-trajectory random stream. mt19937_64 has a standardized output
// sequence, and draws are formed as (x >> 11) * 2^-53, so streams are
// reproducible across standard libraries.
class TrajectoryRng {
 public:
  explicit TrajectoryRng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// splitmix64 finalizer applied to base_seed + golden_gamma * (index + 1).
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t trajectory_index) noexcept;

// Lower-site occupation of ancilla `ancilla`, clamped to [0, 1].
double born_probability(const StateVector& psi, const SystemGeometry& geometry,
                        const BasisSector& basis, int ancilla);

// Squared norms of the outcome-1 and outcome-0 branches.
struct BranchWeights {
  double occupied = 0.0;
  double empty = 0.0;
};
BranchWeights branch_weights(const StateVector& psi, const SystemGeometry& geometry,
                             const BasisSector& basis, int ancilla);

// Outcome 1 iff draw < p1. The selected branch is renormalized in place; the
// ancilla is left in |10> or |01> with no re-initialization. Throws
// ImpossibleOutcome when the selected branch norm is below 1e-12.
MeasurementRecord project_hard(StateVector& psi, const SystemGeometry& geometry,
                               const BasisSector& basis, int ancilla, double draw,
                               double time = 0.0);

// Projects onto a prescribed outcome regardless of the Born weights.
void force_outcome(StateVector& psi, const SystemGeometry& geometry, const BasisSector& basis,
                   int ancilla, int outcome);

// Same Born draw as project_hard; the branch is realized by a short diagonal
// imaginary-potential evolution and renormalized.
MeasurementRecord project_soft(StateVector& psi, const SystemGeometry& geometry,
                               const BasisSector& basis, int ancilla, double draw,
                               const SoftProjectionParams& soft, double time = 0.0);

// Projects every ancilla in ascending chain-site order with no evolution in
// between; one draw per ancilla, consumed in order.
std::vector<MeasurementRecord> measurement_sweep(StateVector& psi, const SystemGeometry& geometry,
                                                 const BasisSector& basis, TrajectoryRng& rng,
                                                 double time,
                                                 ProjectionMode mode = ProjectionMode::Hard,
                                                 const SoftProjectionParams& soft = {});

}  // namespace qzv
