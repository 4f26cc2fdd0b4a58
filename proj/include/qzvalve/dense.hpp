#pragma once

#include <vector>

#include "qzvalve/hilbert.hpp"
#include "qzvalve/sparse.hpp"
#include "qzvalve/state.hpp"

namespace qzv {

inline constexpr std::size_t kDenseOracleMaxDim = 4096;

// exp(-i H t) through a full eigendecomposition of the dense Hermitian
// matrix (LAPACK). Reference path for checking the Krylov propagator.
class DenseEvolution {
 public:
  explicit DenseEvolution(const SparseOperator& hamiltonian);

  StateVector evolve(const StateVector& psi, double t) const;
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  std::size_t dim() const noexcept { return dim_; }

 private:
  std::size_t dim_ = 0;
  bool real_ = true;
  std::vector<double> eigenvalues_;
  std::vector<double> real_vectors_;      // column-major
  std::vector<Complex> complex_vectors_;  // column-major
};

// All eigenvalues of a dense Hermitian matrix given row-major.
std::vector<double> hermitian_eigenvalues(std::vector<Complex> matrix, std::size_t n);

// Entropy from the full reduced density matrix over every A-side bit
// pattern that occurs in the basis, without using the block structure.
double dense_entanglement_entropy(const StateVector& psi, const SystemGeometry& geometry,
                                  const BasisSector& basis);

}  // namespace qzv
