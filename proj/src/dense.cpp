#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "qzvalve/dense.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qzvalve/error.hpp"

namespace qzv {

DenseEvolution::DenseEvolution(const SparseOperator& h) : dim_(h.dim()) {
  if (!h.hermitian()) fail(ErrorCode::InvalidArgument, "dense evolution requires a Hermitian operator");
  if (dim_ > kDenseOracleMaxDim) {
    fail(ErrorCode::SectorTooLarge, "dense oracle limited to dim <= " + std::to_string(kDenseOracleMaxDim));
  }
  const auto n = static_cast<lapack_int>(dim_);
  eigenvalues_.resize(dim_);
  real_ = h.is_real();
  const auto dense = h.to_dense();
  if (real_) {
    real_vectors_.resize(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) real_vectors_[c * dim_ + r] = dense[r * dim_ + c].real();
    }
    if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, real_vectors_.data(), n,
                       eigenvalues_.data()) != 0) {
      fail(ErrorCode::PropagationFailure, "dsyevd failed");
    }
  } else {
    complex_vectors_.resize(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) complex_vectors_[c * dim_ + r] = dense[r * dim_ + c];
    }
    if (LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, complex_vectors_.data(), n,
                       eigenvalues_.data()) != 0) {
      fail(ErrorCode::PropagationFailure, "zheevd failed");
    }
  }
}

StateVector DenseEvolution::evolve(const StateVector& psi, double t) const {
  if (psi.dim() != dim_) fail(ErrorCode::InvalidArgument, "state/operator dimension mismatch");
  // c = V^dag psi, c_k *= exp(-i E_k t), psi' = V c
  std::vector<Complex> c(dim_, 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    Complex acc = 0.0;
    if (real_) {
      const double* v = &real_vectors_[k * dim_];
      for (std::size_t i = 0; i < dim_; ++i) acc += v[i] * psi.amplitudes[i];
    } else {
      const Complex* v = &complex_vectors_[k * dim_];
      for (std::size_t i = 0; i < dim_; ++i) acc += std::conj(v[i]) * psi.amplitudes[i];
    }
    c[k] = acc * std::exp(Complex{0.0, -eigenvalues_[k] * t});
  }
  StateVector out(dim_);
  for (std::size_t k = 0; k < dim_; ++k) {
    if (real_) {
      const double* v = &real_vectors_[k * dim_];
      for (std::size_t i = 0; i < dim_; ++i) out.amplitudes[i] += v[i] * c[k];
    } else {
      const Complex* v = &complex_vectors_[k * dim_];
      for (std::size_t i = 0; i < dim_; ++i) out.amplitudes[i] += v[i] * c[k];
    }
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(std::vector<Complex> matrix, std::size_t n) {
  if (matrix.size() != n * n) fail(ErrorCode::InvalidArgument, "matrix is not n x n");
  std::vector<double> w(n);
  if (n == 0) return w;
  const auto ln = static_cast<lapack_int>(n);
  if (LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'N', 'U', ln, matrix.data(), ln, w.data()) != 0) {
    fail(ErrorCode::InvalidArgument, "zheevd failed");
  }
  return w;
}

double dense_entanglement_entropy(const StateVector& psi, const SystemGeometry& geometry,
                                  const BasisSector& basis) {
  if (psi.dim() != basis.dim()) fail(ErrorCode::InvalidArgument, "state/basis dimension mismatch");
  const int cut = geometry.bipartition_cut();
  const Bits a_mask = (Bits{1} << cut) - 1;

  std::map<Bits, std::size_t> a_index, b_index;
  for (Bits s : basis.states()) {
    a_index.emplace(s & a_mask, 0);
    b_index.emplace(s >> cut, 0);
  }
  std::size_t next = 0;
  for (auto& [k, v] : a_index) v = next++;
  next = 0;
  for (auto& [k, v] : b_index) v = next++;

  const std::size_t na = a_index.size();
  const std::size_t nb = b_index.size();
  std::vector<Complex> coeff(na * nb, 0.0);
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const Bits s = basis.state(j);
    coeff[a_index[s & a_mask] * nb + b_index[s >> cut]] = psi.amplitudes[j];
  }
  // rho_A = Tr_B |psi><psi|
  std::vector<Complex> rho(na * na, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t a2 = 0; a2 < na; ++a2) {
      Complex acc = 0.0;
      for (std::size_t b = 0; b < nb; ++b) acc += coeff[a * nb + b] * std::conj(coeff[a2 * nb + b]);
      rho[a * na + a2] = acc;
    }
  }
  double s = 0.0;
  for (double l : hermitian_eigenvalues(std::move(rho), na)) {
    if (l > 1e-14) s -= l * std::log(l);
  }
  return std::max(s, 0.0);
}

}  // namespace qzv
