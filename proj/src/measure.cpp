#include "qzvalve/measure.hpp"

#include <algorithm>
#include <cmath>

#include "qzvalve/error.hpp"
#include "qzvalve/evolve.hpp"
#include "qzvalve/hamiltonian.hpp"

namespace qzv {
namespace {

constexpr double kClampWindow = 1e-12;
constexpr double kMinBranchNorm = 1e-12;

double clamp_probability(double p) noexcept {
  if (p < 0.0 && p > -kClampWindow) return 0.0;
  if (p > 1.0 && p < 1.0 + kClampWindow) return 1.0;
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

const char* to_string(ProjectionMode mode) noexcept {
  return mode == ProjectionMode::Hard ? "hard" : "soft";
}

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t trajectory_index) noexcept {
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (trajectory_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

BranchWeights branch_weights(const StateVector& psi, const SystemGeometry& geometry,
                             const BasisSector& basis, int ancilla) {
  if (psi.dim() != basis.dim()) fail(ErrorCode::InvalidArgument, "state/basis dimension mismatch");
  const int lower = geometry.ancilla_lower_position(ancilla);
  BranchWeights w;
  const auto states = basis.states();
  for (std::size_t j = 0; j < states.size(); ++j) {
    (occupation(states[j], lower) ? w.occupied : w.empty) += std::norm(psi.amplitudes[j]);
  }
  return w;
}

double born_probability(const StateVector& psi, const SystemGeometry& geometry,
                        const BasisSector& basis, int ancilla) {
  return clamp_probability(branch_weights(psi, geometry, basis, ancilla).occupied);
}

void force_outcome(StateVector& psi, const SystemGeometry& geometry, const BasisSector& basis,
                   int ancilla, int outcome) {
  const int lower = geometry.ancilla_lower_position(ancilla);
  const auto states = basis.states();
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (occupation(states[j], lower) != outcome) psi.amplitudes[j] = 0.0;
  }
  const double n = psi.normalize();
  if (n < kMinBranchNorm) {
    fail(ErrorCode::ImpossibleOutcome,
         "outcome " + std::to_string(outcome) + " on ancilla " + std::to_string(ancilla) +
             " has vanishing branch norm");
  }
}

MeasurementRecord project_hard(StateVector& psi, const SystemGeometry& geometry,
                               const BasisSector& basis, int ancilla, double draw,
                               double time) {
  MeasurementRecord rec;
  rec.time = time;
  rec.ancilla = ancilla;
  rec.mode = ProjectionMode::Hard;
  rec.p1 = born_probability(psi, geometry, basis, ancilla);
  rec.pre_projection_na = rec.p1;
  rec.outcome = draw < rec.p1 ? 1 : 0;
  force_outcome(psi, geometry, basis, ancilla, rec.outcome);
  return rec;
}

MeasurementRecord project_soft(StateVector& psi, const SystemGeometry& geometry,
                               const BasisSector& basis, int ancilla, double draw,
                               const SoftProjectionParams& soft, double time) {
  MeasurementRecord rec;
  rec.time = time;
  rec.ancilla = ancilla;
  rec.mode = ProjectionMode::Soft;
  rec.p1 = born_probability(psi, geometry, basis, ancilla);
  rec.pre_projection_na = rec.p1;
  rec.outcome = draw < rec.p1 ? 1 : 0;

  // -iA damps the occupied branch (outcome 0); +iA grows it, which after the
  // growth-rate shift is damping of the empty branch (outcome 1).
  const int sign = rec.outcome == 1 ? 1 : -1;
  const auto generator = build_soft_projection(sign, soft.strength, ancilla, geometry, basis);
  try {
    psi = propagate_soft(generator, psi, soft.eta, soft.substeps, true);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::VanishingBranch) throw;
    fail(ErrorCode::ImpossibleOutcome,
         "soft projection onto outcome " + std::to_string(rec.outcome) + " vanished");
  }
  psi.normalize();
  return rec;
}

std::vector<MeasurementRecord> measurement_sweep(StateVector& psi, const SystemGeometry& geometry,
                                                 const BasisSector& basis, TrajectoryRng& rng,
                                                 double time, ProjectionMode mode,
                                                 const SoftProjectionParams& soft) {
  std::vector<MeasurementRecord> records;
  records.reserve(static_cast<std::size_t>(geometry.n_ancillas()));
  for (int k = 0; k < geometry.n_ancillas(); ++k) {
    const double draw = rng.uniform();
    records.push_back(mode == ProjectionMode::Hard
                          ? project_hard(psi, geometry, basis, k, draw, time)
                          : project_soft(psi, geometry, basis, k, draw, soft, time));
  }
  return records;
}

}  // namespace qzv
