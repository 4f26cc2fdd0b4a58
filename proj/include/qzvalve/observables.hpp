#pragma once

#include <span>
#include <vector>

#include "qzvalve/hilbert.hpp"
#include "qzvalve/state.hpp"

namespace qzv {

// Observables sampled on a strictly increasing time grid.
struct ObservableSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> site_densities;     // [t][i], L entries
  std::vector<std::vector<double>> ancilla_densities;  // [t][k], lower-site n_a
  std::vector<double> entropy;
  std::vector<double> imbalance;

  std::size_t size() const noexcept { return times.size(); }
};

// n_i for i = 1..L (returned 0-based).
std::vector<double> site_densities(const StateVector& psi, const SystemGeometry& geometry,
                                   const BasisSector& basis);

// Lower-site occupation n_a of each ancilla.
std::vector<double> ancilla_densities(const StateVector& psi, const SystemGeometry& geometry,
                                      const BasisSector& basis);

// Lower + upper occupation of each ancilla pair (1 in the sector).
std::vector<double> ancilla_occupancies(const StateVector& psi, const SystemGeometry& geometry,
                                        const BasisSector& basis);

// -L/4 + sum_{i <= L/2} n_i.
double imbalance(std::span<const double> site_densities);

enum class Side { A, B };

// Reduced density matrices assembled block by block from the bipartition,
// never materializing the full density matrix.
class EntropyCalculator {
 public:
  EntropyCalculator(const SystemGeometry& geometry, const BasisSector& basis);

  // Von Neumann entropy in nats; eigenvalues below 1e-14 are dropped.
  double entropy(const StateVector& psi) const;

  // All eigenvalues of rho_A (or rho_B), ascending, across blocks.
  std::vector<double> spectrum(const StateVector& psi, Side side = Side::A) const;

  // Trace and smallest eigenvalue of rho_A, for sanity checks.
  double trace(const StateVector& psi) const;

  const Bipartition& bipartition() const noexcept { return bipartition_; }

 private:
  Bipartition bipartition_;
};

double entanglement_entropy(const StateVector& psi, const SystemGeometry& geometry,
                            const BasisSector& basis);

// Trapezoidal integral of S over the recorded grid.
double integrated_entropy(std::span<const double> times, std::span<const double> entropy);
double integrated_entropy(const ObservableSeries& series);

// Population variance (divisor R) of S across trajectories at grid index t.
double entropy_variance(std::span<const ObservableSeries* const> ensemble, std::size_t t);

// (L/2) ln 2 - 1/2: random-pure-state reference for equal halves.
double page_entropy(int chain_length);

}  // namespace qzv
