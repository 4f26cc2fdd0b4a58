#pragma once

#include "qzvalve/hilbert.hpp"
#include "qzvalve/sparse.hpp"

namespace qzv {

// Energies in units of the hopping J, times in units of 1/J.
struct ModelParams {
  double J = 1.0;         // hopping, shared by chain and ancilla pairs
  double U = 1.0;         // chain nearest-neighbour interaction
  double M = 0.0;         // chain-ancilla density-density interaction
  double period = 2.0;    // measurement period dT
  double t_final = 2.0;
  double dt_obs = 0.1;

  // Throws ErrorCode::Config with a field-level message.
  void validate() const;
  // dT / dt_obs, required to be an integer.
  int steps_per_period() const;
  // t_final / dt_obs, required to be an integer.
  int total_steps() const;
};

SparseOperator build_chain_hamiltonian(const ModelParams& params,
                                       const SystemGeometry& geometry,
                                       const BasisSector& basis);

SparseOperator build_ancilla_hamiltonian(const ModelParams& params,
                                         const SystemGeometry& geometry,
                                         const BasisSector& basis);

SparseOperator build_coupling_hamiltonian(const ModelParams& params,
                                          const SystemGeometry& geometry,
                                          const BasisSector& basis);

SparseOperator build_total_hamiltonian(const ModelParams& params,
                                       const SystemGeometry& geometry,
                                       const BasisSector& basis);

// Diagonal occupation operator of one bit position.
SparseOperator build_density_operator(int position, const BasisSector& basis);

// +/- i * strength on states whose lower ancilla site is occupied.
SparseOperator build_soft_projection(int sign, double strength, int ancilla,
                                     const SystemGeometry& geometry,
                                     const BasisSector& basis);

}  // namespace qzv
