#include "qzvalve/observables.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qzvalve/error.hpp"

namespace qzv {
namespace {

constexpr double kEigenvalueFloor = 1e-14;

void check_dim(const StateVector& psi, const BasisSector& basis) {
  if (psi.dim() != basis.dim()) fail(ErrorCode::InvalidArgument, "state/basis dimension mismatch");
}

std::vector<double> position_densities(const StateVector& psi, const BasisSector& basis,
                                       std::span<const int> positions) {
  check_dim(psi, basis);
  std::vector<double> n(positions.size(), 0.0);
  const auto states = basis.states();
  for (std::size_t j = 0; j < states.size(); ++j) {
    const double w = std::norm(psi.amplitudes[j]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (occupation(states[j], positions[i])) n[i] += w;
    }
  }
  return n;
}

// Amplitudes reshaped into one (A configs x B configs) matrix per block.
std::vector<Eigen::MatrixXcd> schmidt_blocks(const StateVector& psi, const Bipartition& bp) {
  const auto blocks = bp.blocks();
  std::vector<Eigen::MatrixXcd> coeff;
  coeff.reserve(blocks.size());
  for (const auto& b : blocks) {
    coeff.emplace_back(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(b.a_configs.size()),
                                              static_cast<Eigen::Index>(b.b_configs.size())));
  }
  for (std::size_t j = 0; j < psi.dim(); ++j) {
    const Complex z = psi.amplitudes[j];
    if (z == Complex{0.0, 0.0}) continue;
    coeff[static_cast<std::size_t>(bp.block_of(j))](bp.row_of(j), bp.col_of(j)) = z;
  }
  return coeff;
}

}  // namespace

std::vector<double> site_densities(const StateVector& psi, const SystemGeometry& geometry,
                                   const BasisSector& basis) {
  std::vector<int> pos;
  for (int s = 1; s <= geometry.chain_length(); ++s) pos.push_back(geometry.chain_position(s));
  return position_densities(psi, basis, pos);
}

std::vector<double> ancilla_densities(const StateVector& psi, const SystemGeometry& geometry,
                                      const BasisSector& basis) {
  std::vector<int> pos;
  for (int k = 0; k < geometry.n_ancillas(); ++k) pos.push_back(geometry.ancilla_lower_position(k));
  return position_densities(psi, basis, pos);
}

std::vector<double> ancilla_occupancies(const StateVector& psi, const SystemGeometry& geometry,
                                        const BasisSector& basis) {
  std::vector<int> lo, up;
  for (int k = 0; k < geometry.n_ancillas(); ++k) {
    lo.push_back(geometry.ancilla_lower_position(k));
    up.push_back(geometry.ancilla_upper_position(k));
  }
  auto n = position_densities(psi, basis, lo);
  const auto u = position_densities(psi, basis, up);
  for (std::size_t k = 0; k < n.size(); ++k) n[k] += u[k];
  return n;
}

double imbalance(std::span<const double> densities) {
  if (densities.size() % 2 != 0) fail(ErrorCode::InvalidArgument, "imbalance needs an even chain");
  const std::size_t half = densities.size() / 2;
  double left = 0.0;
  for (std::size_t i = 0; i < half; ++i) left += densities[i];
  return left - static_cast<double>(densities.size()) / 4.0;
}

EntropyCalculator::EntropyCalculator(const SystemGeometry& geometry, const BasisSector& basis)
    : bipartition_(geometry, basis) {}

std::vector<double> EntropyCalculator::spectrum(const StateVector& psi, Side side) const {
  if (psi.dim() != bipartition_.size()) fail(ErrorCode::InvalidArgument, "state/basis dimension mismatch");
  const auto coeff = schmidt_blocks(psi, bipartition_);

  std::vector<double> out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (const auto& c : coeff) {
    if (c.size() == 0) continue;
    const Eigen::MatrixXcd rho =
        side == Side::A ? Eigen::MatrixXcd(c * c.adjoint()) : Eigen::MatrixXcd(c.adjoint() * c);
    solver.compute(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      fail(ErrorCode::InvalidArgument, "reduced density matrix eigensolver failed");
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      out.push_back(solver.eigenvalues()(i));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double EntropyCalculator::entropy(const StateVector& psi) const {
  if (psi.dim() != bipartition_.size()) fail(ErrorCode::InvalidArgument, "state/basis dimension mismatch");
  const auto coeff = schmidt_blocks(psi, bipartition_);

  double s = 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (const auto& c : coeff) {
    if (c.size() == 0 || c.squaredNorm() < kEigenvalueFloor) continue;
    // The smaller Gram matrix carries the same nonzero spectrum.
    const Eigen::MatrixXcd rho = c.rows() <= c.cols() ? Eigen::MatrixXcd(c * c.adjoint())
                                                      : Eigen::MatrixXcd(c.adjoint() * c);
    solver.compute(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      fail(ErrorCode::InvalidArgument, "reduced density matrix eigensolver failed");
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const double l = solver.eigenvalues()(i);
      if (l > kEigenvalueFloor) s -= l * std::log(l);
    }
  }
  return std::max(s, 0.0);
}

double EntropyCalculator::trace(const StateVector& psi) const {
  double t = 0.0;
  for (double l : spectrum(psi, Side::A)) t += l;
  return t;
}

double entanglement_entropy(const StateVector& psi, const SystemGeometry& geometry,
                            const BasisSector& basis) {
  check_dim(psi, basis);
  return EntropyCalculator(geometry, basis).entropy(psi);
}

double integrated_entropy(std::span<const double> times, std::span<const double> entropy) {
  if (times.size() != entropy.size()) {
    fail(ErrorCode::GridMismatch, "time and entropy series differ in length");
  }
  if (times.size() < 2) fail(ErrorCode::InsufficientData, "integrated entropy needs >= 2 samples");
  double xi = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    xi += 0.5 * (times[i] - times[i - 1]) * (entropy[i] + entropy[i - 1]);
  }
  return xi;
}

double integrated_entropy(const ObservableSeries& series) {
  return integrated_entropy(series.times, series.entropy);
}

double entropy_variance(std::span<const ObservableSeries* const> ensemble, std::size_t t) {
  if (ensemble.empty()) fail(ErrorCode::InsufficientData, "entropy variance of an empty ensemble");
  const auto& ref = ensemble.front()->times;
  if (t >= ref.size()) fail(ErrorCode::GridMismatch, "time index beyond the grid");
  double mean = 0.0;
  for (const auto* s : ensemble) {
    if (s->times.size() != ref.size() || s->times[t] != ref[t]) {
      fail(ErrorCode::GridMismatch, "trajectories do not share a time grid");
    }
    mean += s->entropy[t];
  }
  mean /= static_cast<double>(ensemble.size());
  double var = 0.0;
  for (const auto* s : ensemble) var += (s->entropy[t] - mean) * (s->entropy[t] - mean);
  return var / static_cast<double>(ensemble.size());
}

double page_entropy(int chain_length) {
  if (chain_length < 2 || chain_length % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "Page reference needs an even chain length");
  }
  return 0.5 * chain_length * std::log(2.0) - 0.5;
}

}  // namespace qzv
