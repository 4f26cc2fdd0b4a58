#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qzvalve/error.hpp"
#include "qzvalve/evolve.hpp"
#include "qzvalve/hamiltonian.hpp"
#include "qzvalve/hilbert.hpp"
#include "qzvalve/measure.hpp"
#include "qzvalve/observables.hpp"

namespace qzv {

enum class AncillaPlacement { None, Single, Double, AllSites, Custom };

struct GeometrySpec {
  int chain_length = 12;
  AncillaPlacement placement = AncillaPlacement::Single;
  std::vector<int> custom_sites;  // 1-based, used with Custom

  // single -> {L/2}, double -> {L/2, L/2+1}, all-sites -> {1..L}.
  std::vector<int> ancilla_sites() const;
  SystemGeometry build() const { return SystemGeometry(chain_length, ancilla_sites()); }
};

enum class InitialState { DomainWall, GroundState };

struct ProtocolConfig {
  std::string name;
  GeometrySpec geometry;
  ModelParams params;
  InitialState initial_state = InitialState::DomainWall;
  bool measurements = true;  // false: unitary evolution only (dT -> infinity)
  ProjectionMode mode = ProjectionMode::Hard;
  SoftProjectionParams soft;
  int trajectories = 1;
  std::uint64_t base_seed = 0;
  unsigned workers = 1;  // 0: one per hardware thread
  std::size_t max_dim = kDefaultMaxDim;
  KrylovOptions krylov;

  void validate() const;
};

// Basis, operators and initial state for one configuration. Immutable after
// construction and shared read-only by all trajectories of an ensemble.
class System {
 public:
  explicit System(const ProtocolConfig& config);

  const SystemGeometry& geometry() const noexcept { return geometry_; }
  const BasisSector& basis() const noexcept { return basis_; }
  const SparseOperator& hamiltonian() const noexcept { return hamiltonian_; }
  const EntropyCalculator& entropy() const noexcept { return entropy_; }
  const StateVector& initial_state() const noexcept { return initial_; }

 private:
  SystemGeometry geometry_;
  BasisSector basis_;
  SparseOperator hamiltonian_;
  EntropyCalculator entropy_;
  StateVector initial_;
};

// Domain wall: chain sites 1..L/2 filled, every ancilla in |10>. Ground
// state: Lanczos ground state of the bare chain, tensored with |10> per
// ancilla.
StateVector prepare_initial_state(const ProtocolConfig& config, const SystemGeometry& geometry,
                                  const BasisSector& basis);

// Chain-only amplitudes of the configured initial chain state.
StateVector prepare_chain_state(const ProtocolConfig& config, const SystemGeometry& chain_geometry,
                                const BasisSector& chain_basis);

struct StateFingerprint {
  double norm = 0.0;
  double chain_particles = 0.0;
  std::vector<double> ancilla_occupancy;
};

struct TrajectoryResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  // Grid samples; at projection instants these are the post-sweep values.
  ObservableSeries series;
  // One sample per sweep, taken just before it.
  ObservableSeries pre_projection;
  std::vector<MeasurementRecord> records;
  double xi = 0.0;
  StateFingerprint final_state;
  double max_particle_drift = 0.0;  // max |sum_i n_i - L/2| over recorded instants
  double max_ancilla_drift = 0.0;   // max |n_lower + n_upper - 1|
};

// Raised by run_trajectory; carries the 1-based measurement cycle.
class TrajectoryError : public Error {
 public:
  TrajectoryError(ErrorCode code, int cycle, const std::string& message)
      : Error(code, "cycle " + std::to_string(cycle) + ": " + message), cycle_(cycle) {}
  int cycle() const noexcept { return cycle_; }

 private:
  int cycle_;
};

enum class SamplePoint { Grid, PreProjection };

// Observes every recorded state; used by oracles and tests.
using StateObserver = std::function<void(double t, SamplePoint point, const StateVector& psi)>;

// Evolve dT under H_total, then sweep the ancillas; repeated up to t_final.
// The first sweep happens at t = dT. Deterministic in (config, index).
TrajectoryResult run_trajectory(const System& system, const ProtocolConfig& config,
                                std::size_t index, const StateObserver& observer = {});

// Unitary chain-only evolution of the initial chain state on the same grid
// (ancillas removed, entropy across the middle of the chain).
ObservableSeries run_chain_reference(const ProtocolConfig& config);

struct Representative {
  std::string label;  // min, p25, median, p75, max
  double percentile = 0.0;
  std::size_t position = 0;  // index into the ranked input
  double xi = 0.0;
};

// Nearest-rank percentiles of the Xi values, ties broken by position. Five
// representatives for R >= 5, otherwise min, median and max.
std::vector<Representative> sort_by_xi(std::span<const double> xi);

inline constexpr double kDefaultBranchingThreshold = std::numbers::ln2;

// First time S(t) exceeds S(0) + threshold.
std::optional<double> branching_time(const ObservableSeries& series,
                                     double threshold = kDefaultBranchingThreshold);

// One measurement window [k dT, (k+1) dT) of one ancilla. Samples are the
// grid values inside the window plus the pre-projection value at its end.
struct WindowReconstruction {
  int window = 0;
  double start = 0.0;
  int ancilla = 0;
  int outcome = 0;              // projection that opened the window
  double true_density = 0.0;    // mean n of the attached chain site over the samples
  std::optional<double> estimate;  // set for outcome-1 windows only
};

std::vector<WindowReconstruction> reconstruct_windows(const TrajectoryResult& trajectory,
                                                      const ProtocolConfig& config,
                                                      const SystemGeometry& geometry, int ancilla);

struct TrajectoryFailure {
  std::size_t index = 0;
  int cycle = 0;
  ErrorCode code = ErrorCode::TrajectoryFailed;
  std::string message;
};

struct EnsembleResult {
  std::vector<TrajectoryResult> trajectories;  // successful runs, ascending index
  std::vector<TrajectoryFailure> failures;

  std::vector<double> times;
  std::vector<double> entropy_mean;
  std::vector<double> entropy_variance;
  std::vector<double> imbalance_mean;
  std::vector<double> imbalance_band;  // 2 sigma of the mean
  std::vector<std::vector<double>> density_mean;
  std::vector<std::vector<double>> ancilla_mean;
  // `position` indexes `trajectories`.
  std::vector<Representative> representatives;
};

EnsembleResult run_ensemble(const ProtocolConfig& config);
EnsembleResult run_ensemble(const System& system, const ProtocolConfig& config);

// Order-independent reduction of finished trajectories.
EnsembleResult aggregate(std::vector<TrajectoryResult> trajectories,
                         std::vector<TrajectoryFailure> failures);

}  // namespace qzv
