#include "qzvalve/hamiltonian.hpp"

#include <cmath>
#include <sstream>

#include "qzvalve/error.hpp"

namespace qzv {
namespace {

int integer_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const double n = std::round(r);
  if (n < 1.0 || std::abs(r - n) > 1e-9 * std::max(1.0, n)) {
    std::ostringstream msg;
    msg << what << " = " << r << " is not a positive integer";
    fail(ErrorCode::Config, msg.str());
  }
  return static_cast<int>(n);
}

// Adds the hopping -J/2 (b_p^dag b_q + h.c.) for one pair of bit positions.
void add_hopping(std::vector<Triplet>& t, const BasisSector& basis, int p, int q,
                 double amplitude) {
  const Bits flip = (Bits{1} << p) | (Bits{1} << q);
  const auto states = basis.states();
  for (std::size_t j = 0; j < states.size(); ++j) {
    const Bits s = states[j];
    if (occupation(s, p) == occupation(s, q)) continue;
    const auto target = basis.index_of(s ^ flip);
    if (!target) fail(ErrorCode::InvalidArgument, "hopping leaves the sector");
    t.push_back({*target, j, amplitude});
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!(J > 0.0)) fail(ErrorCode::Config, "model.J: must be > 0");
  if (!std::isfinite(U)) fail(ErrorCode::Config, "model.U: must be finite");
  if (!std::isfinite(M) || M < 0.0) fail(ErrorCode::Config, "model.M: must be finite and >= 0");
  if (!(period > 0.0)) fail(ErrorCode::Config, "model.dT: must be > 0");
  if (!(dt_obs > 0.0)) fail(ErrorCode::Config, "model.dt_obs: must be > 0");
  if (!(t_final >= period)) fail(ErrorCode::Config, "model.t_final: must be >= model.dT");
  integer_ratio(period, dt_obs, "model.dT / model.dt_obs");
  integer_ratio(t_final, dt_obs, "model.t_final / model.dt_obs");
}

int ModelParams::steps_per_period() const {
  return integer_ratio(period, dt_obs, "model.dT / model.dt_obs");
}

int ModelParams::total_steps() const {
  return integer_ratio(t_final, dt_obs, "model.t_final / model.dt_obs");
}

SparseOperator build_chain_hamiltonian(const ModelParams& params,
                                       const SystemGeometry& geometry,
                                       const BasisSector& basis) {
  std::vector<Triplet> t;
  const int L = geometry.chain_length();
  for (int i = 1; i < L; ++i) {
    add_hopping(t, basis, geometry.chain_position(i), geometry.chain_position(i + 1),
                -0.5 * params.J);
  }
  const auto states = basis.states();
  for (std::size_t j = 0; j < states.size(); ++j) {
    int pairs = 0;
    for (int i = 1; i < L; ++i) {
      pairs += occupation(states[j], geometry.chain_position(i)) &
               occupation(states[j], geometry.chain_position(i + 1));
    }
    if (pairs != 0) t.push_back({j, j, params.U * pairs});
  }
  return SparseOperator(basis.dim(), std::move(t), true);
}

SparseOperator build_ancilla_hamiltonian(const ModelParams& params,
                                         const SystemGeometry& geometry,
                                         const BasisSector& basis) {
  std::vector<Triplet> t;
  for (int k = 0; k < geometry.n_ancillas(); ++k) {
    add_hopping(t, basis, geometry.ancilla_lower_position(k),
                geometry.ancilla_upper_position(k), -0.5 * params.J);
  }
  return SparseOperator(basis.dim(), std::move(t), true);
}

SparseOperator build_coupling_hamiltonian(const ModelParams& params,
                                          const SystemGeometry& geometry,
                                          const BasisSector& basis) {
  std::vector<Triplet> t;
  const auto sites = geometry.ancilla_chain_sites();
  const auto states = basis.states();
  for (std::size_t j = 0; j < states.size(); ++j) {
    int bound = 0;
    for (int k = 0; k < geometry.n_ancillas(); ++k) {
      bound += occupation(states[j], geometry.chain_position(sites[k])) &
               occupation(states[j], geometry.ancilla_lower_position(k));
    }
    if (bound != 0) t.push_back({j, j, params.M * bound});
  }
  return SparseOperator(basis.dim(), std::move(t), true);
}

SparseOperator build_total_hamiltonian(const ModelParams& params,
                                       const SystemGeometry& geometry,
                                       const BasisSector& basis) {
  return build_chain_hamiltonian(params, geometry, basis) +
         build_ancilla_hamiltonian(params, geometry, basis) +
         build_coupling_hamiltonian(params, geometry, basis);
}

SparseOperator build_density_operator(int position, const BasisSector& basis) {
  std::vector<Triplet> t;
  const auto states = basis.states();
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (occupation(states[j], position)) t.push_back({j, j, 1.0});
  }
  return SparseOperator(basis.dim(), std::move(t), true);
}

SparseOperator build_soft_projection(int sign, double strength, int ancilla,
                                     const SystemGeometry& geometry,
                                     const BasisSector& basis) {
  if (sign != 1 && sign != -1) fail(ErrorCode::InvalidArgument, "soft projection sign must be +1 or -1");
  if (!(strength > 0.0)) fail(ErrorCode::InvalidArgument, "soft projection strength must be > 0");
  const int lower = geometry.ancilla_lower_position(ancilla);
  const Complex entry{0.0, sign * strength};
  std::vector<Triplet> t;
  const auto states = basis.states();
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (occupation(states[j], lower)) t.push_back({j, j, entry});
  }
  return SparseOperator(basis.dim(), std::move(t), false);
}

}  // namespace qzv
