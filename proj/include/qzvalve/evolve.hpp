#pragma once

#include <vector>

#include "qzvalve/sparse.hpp"
#include "qzvalve/state.hpp"

namespace qzv {

struct KrylovOptions {
  int min_dim = 20;
  int max_dim = 60;
  int dim_increment = 10;
  double tolerance = 1e-12;  // a-posteriori local error per step
  int max_splits = 24;       // dt is halved at most this many times
};

// Lanczos propagator for exp(-i H dt) psi on a Hermitian H. Holds the Krylov
// workspace so repeated steps on one trajectory do not reallocate; one
// instance per thread.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(const SparseOperator& hamiltonian, KrylovOptions options = {});

  void step(StateVector& psi, double dt);

  struct Stats {
    long steps = 0;
    long matvecs = 0;
    long splits = 0;
    double max_error_estimate = 0.0;
  };
  const Stats& stats() const noexcept { return stats_; }

 private:
  // Returns false when the error estimate at max_dim exceeds the tolerance.
  bool try_step(StateVector& psi, double dt);

  const SparseOperator& h_;
  KrylovOptions opt_;
  std::vector<Complex> basis_;  // column-major, dim x max_dim
  std::vector<Complex> w_;
  Stats stats_;
};

StateVector propagate(const SparseOperator& hamiltonian, const StateVector& psi,
                      double dt, const KrylovOptions& options = {});

// exp(-i H_proj eta) psi for a diagonal generator, applied in `substeps`
// equal increments. Each increment is rescaled by exp(-g_max * eta/substeps),
// g_max being the largest growth rate Im(H_proj), so a +i*A generator acts as
// damping of the complementary component instead of overflowing. The result
// is not normalized. Throws VanishingBranch when the norm drops below 1e-12.
StateVector propagate_soft(const SparseOperator& projection, const StateVector& psi,
                           double eta, int substeps, bool renormalize_substeps = false);

struct LanczosOptions {
  int max_iterations = 600;
  double residual_tolerance = 1e-8;
  double gap_tolerance = 1e-6;
  unsigned long long seed = 0x5eed5eedULL;
};

struct GroundState {
  double energy = 0.0;
  double first_excited = 0.0;
  double residual = 0.0;
  StateVector state;
};

// Lowest eigenpair with full reorthogonalization; the first excited level is
// obtained from a second run deflated against the ground state. Throws
// NotConverged or DegenerateGroundState.
GroundState ground_state(const SparseOperator& hamiltonian, const LanczosOptions& options = {});

}  // namespace qzv
