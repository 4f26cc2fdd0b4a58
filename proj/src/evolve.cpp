#include "qzvalve/evolve.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qzvalve/error.hpp"

namespace qzv {
namespace {

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double vnorm(std::span<const Complex> x) noexcept {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

void scale(std::span<Complex> x, double a) noexcept {
  for (auto& z : x) z *= a;
}

// Lowest eigenpair of the symmetric tridiagonal matrix (alpha, beta).
struct TridiagonalEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

TridiagonalEigen tridiagonal_eigen(const std::vector<double>& alpha,
                                   const std::vector<double>& beta, std::size_t m) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(m));
  Eigen::VectorXd e(static_cast<Eigen::Index>(m > 1 ? m - 1 : 1));
  for (std::size_t i = 0; i < m; ++i) d(static_cast<Eigen::Index>(i)) = alpha[i];
  for (std::size_t i = 0; i + 1 < m; ++i) e(static_cast<Eigen::Index>(i)) = beta[i];
  if (m == 1) {
    return {d, Eigen::MatrixXd::Ones(1, 1)};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e.head(static_cast<Eigen::Index>(m - 1)),
                                Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::PropagationFailure, "tridiagonal eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

KrylovPropagator::KrylovPropagator(const SparseOperator& hamiltonian, KrylovOptions options)
    : h_(hamiltonian), opt_(options) {
  if (!h_.hermitian()) {
    fail(ErrorCode::InvalidArgument, "Krylov propagation requires a Hermitian operator");
  }
  if (opt_.min_dim < 2 || opt_.max_dim < opt_.min_dim || opt_.dim_increment < 1) {
    fail(ErrorCode::InvalidArgument, "invalid Krylov dimensions");
  }
  w_.resize(h_.dim());
}

bool KrylovPropagator::try_step(StateVector& psi, double dt) {
  const auto dim = static_cast<Eigen::Index>(h_.dim());
  const double psi_norm = psi.norm();
  if (psi_norm == 0.0) return true;

  const auto max_m = std::min<Eigen::Index>(opt_.max_dim, dim);
  if (basis_.size() < static_cast<std::size_t>(dim * max_m)) {
    basis_.resize(static_cast<std::size_t>(dim * max_m));
  }
  Eigen::Map<Eigen::MatrixXcd> v(basis_.data(), dim, max_m);
  Eigen::Map<Eigen::VectorXcd> w(w_.data(), dim);
  const Eigen::Map<const Eigen::VectorXcd> x(psi.amplitudes.data(), dim);
  std::vector<double> alpha, beta;
  alpha.reserve(static_cast<std::size_t>(max_m));
  beta.reserve(static_cast<std::size_t>(max_m));

  v.col(0) = x / psi_norm;
  double spectral_scale = 0.0;
  for (Eigen::Index j = 0; j < max_m; ++j) {
    h_.apply(std::span<const Complex>(v.col(j).data(), static_cast<std::size_t>(dim)), w_);
    ++stats_.matvecs;
    const double a = v.col(j).dot(w).real();
    w -= a * v.col(j);
    if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * v.col(j - 1);
    // Full reorthogonalization against the whole Krylov basis.
    const auto vj = v.leftCols(j + 1);
    w.noalias() -= vj * (vj.adjoint() * w);
    const double b = w.norm();
    alpha.push_back(a);
    spectral_scale = std::max({spectral_scale, std::abs(a), b});

    const auto m = static_cast<std::size_t>(j + 1);
    const bool breakdown = b <= 1e-14 * (1.0 + spectral_scale) || j + 1 == dim;
    const bool checkpoint =
        m >= static_cast<std::size_t>(opt_.min_dim) &&
        (m - static_cast<std::size_t>(opt_.min_dim)) % static_cast<std::size_t>(opt_.dim_increment) == 0;
    if (breakdown || checkpoint || j + 1 == max_m) {
      const auto eig = tridiagonal_eigen(alpha, beta, m);
      Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
      for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k) {
        const Complex phase = std::exp(Complex{0.0, -eig.values(k) * dt});
        c += eig.vectors.col(k).cast<Complex>() * (phase * eig.vectors(0, k));
      }
      const double error = breakdown ? 0.0 : b * std::abs(c(static_cast<Eigen::Index>(m - 1)));
      if (error <= opt_.tolerance) {
        stats_.max_error_estimate = std::max(stats_.max_error_estimate, error);
        Eigen::Map<Eigen::VectorXcd>(psi.amplitudes.data(), dim).noalias() =
            psi_norm * (v.leftCols(j + 1) * c);
        return true;
      }
      if (j + 1 == max_m) return false;
    }
    beta.push_back(b);
    v.col(j + 1) = w / b;
  }
  return false;
}

void KrylovPropagator::step(StateVector& psi, double dt) {
  if (psi.dim() != h_.dim()) fail(ErrorCode::InvalidArgument, "state/operator dimension mismatch");
  if (!std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "non-finite time step");
  if (dt == 0.0) return;
  ++stats_.steps;

  // Explicit stack of pending sub-intervals, so the halving fallback stays
  // iterative.
  struct Pending {
    double dt;
    int depth;
  };
  std::vector<Pending> todo{{dt, 0}};
  while (!todo.empty()) {
    const Pending p = todo.back();
    todo.pop_back();
    if (try_step(psi, p.dt)) continue;
    if (p.depth >= opt_.max_splits) {
      std::ostringstream msg;
      msg << "Krylov residual above tolerance after " << p.depth
          << " step halvings (dt = " << p.dt << ")";
      fail(ErrorCode::PropagationFailure, msg.str());
    }
    ++stats_.splits;
    todo.push_back({0.5 * p.dt, p.depth + 1});
    todo.push_back({0.5 * p.dt, p.depth + 1});
  }
}

StateVector propagate(const SparseOperator& hamiltonian, const StateVector& psi,
                      double dt, const KrylovOptions& options) {
  StateVector out = psi;
  KrylovPropagator prop(hamiltonian, options);
  prop.step(out, dt);
  return out;
}

StateVector propagate_soft(const SparseOperator& projection, const StateVector& psi,
                           double eta, int substeps, bool renormalize_substeps) {
  if (substeps < 1) fail(ErrorCode::InvalidArgument, "soft projection needs substeps >= 1");
  if (!(eta > 0.0)) fail(ErrorCode::InvalidArgument, "soft projection needs eta > 0");
  if (!projection.is_diagonal()) {
    fail(ErrorCode::InvalidArgument, "soft projection generator must be diagonal");
  }
  if (psi.dim() != projection.dim()) {
    fail(ErrorCode::InvalidArgument, "state/operator dimension mismatch");
  }
  const auto diag = projection.diagonal_values();
  const double h = eta / substeps;

  double g_max = -std::numeric_limits<double>::infinity();
  for (const auto& d : diag) g_max = std::max(g_max, d.imag() * h);

  std::vector<Complex> factor(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    factor[i] = std::exp(diag[i].imag() * h - g_max) *
                std::exp(Complex{0.0, -diag[i].real() * h});
  }

  StateVector out = psi;
  for (int s = 0; s < substeps; ++s) {
    for (std::size_t i = 0; i < factor.size(); ++i) out.amplitudes[i] *= factor[i];
    if (renormalize_substeps && s + 1 < substeps) {
      if (out.norm() < 1e-300) break;
      out.normalize();
    }
  }
  if (out.norm() < 1e-12) {
    fail(ErrorCode::VanishingBranch, "soft projection annihilated the state");
  }
  return out;
}

namespace {

struct LanczosResult {
  double value = 0.0;
  double ritz_residual = 0.0;
  std::vector<Complex> vector;
  bool found = false;
};

void orthogonalize(std::span<Complex> w, const std::vector<const std::vector<Complex>*>& against) {
  for (const auto* v : against) axpy(-inner(*v, w), *v, w);
}

LanczosResult lowest_eigenpair(const SparseOperator& h, std::vector<Complex> start,
                               const std::vector<const std::vector<Complex>*>& deflate,
                               const LanczosOptions& opt) {
  const std::size_t dim = h.dim();
  LanczosResult result;
  for (int pass = 0; pass < 2; ++pass) orthogonalize(start, deflate);
  const double n0 = vnorm(start);
  if (n0 < 1e-12) return result;
  scale(start, 1.0 / n0);

  const std::size_t limit = std::min<std::size_t>(
      static_cast<std::size_t>(opt.max_iterations), dim - deflate.size());
  std::vector<std::vector<Complex>> v;
  v.push_back(std::move(start));
  std::vector<double> alpha, beta;
  std::vector<Complex> w(dim);
  double spectral_scale = 0.0;

  for (std::size_t j = 0; j < limit; ++j) {
    h.apply(v[j], w);
    orthogonalize(w, deflate);
    const double a = inner(v[j], w).real();
    axpy(-a, v[j], w);
    if (j > 0) axpy(-beta[j - 1], v[j - 1], w);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i <= j; ++i) axpy(-inner(v[i], w), v[i], w);
      orthogonalize(w, deflate);
    }
    const double b = vnorm(w);
    alpha.push_back(a);
    spectral_scale = std::max({spectral_scale, std::abs(a), b});
    const std::size_t m = j + 1;
    const bool breakdown =
        b <= 1e-13 * (1.0 + spectral_scale) || m == dim - deflate.size();
    if (breakdown || m % 5 == 0 || m == limit) {
      const auto eig = tridiagonal_eigen(alpha, beta, m);
      const double ritz_residual = breakdown ? 0.0 : b * std::abs(eig.vectors(static_cast<Eigen::Index>(m - 1), 0));
      if (ritz_residual < 1e-3 * opt.residual_tolerance || breakdown) {
        result.value = eig.values(0);
        result.ritz_residual = ritz_residual;
        result.vector.assign(dim, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
          axpy(eig.vectors(static_cast<Eigen::Index>(k), 0), v[k], result.vector);
        }
        scale(result.vector, 1.0 / vnorm(result.vector));
        result.found = true;
        return result;
      }
    }
    beta.push_back(b);
    scale(w, 1.0 / b);
    v.push_back(w);
  }
  return result;
}

std::vector<Complex> random_start(std::size_t dim, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::vector<Complex> s(dim);
  for (auto& z : s) z = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  return s;
}

}  // namespace

GroundState ground_state(const SparseOperator& hamiltonian, const LanczosOptions& options) {
  if (!hamiltonian.hermitian()) {
    fail(ErrorCode::InvalidArgument, "ground state requires a Hermitian operator");
  }
  const std::size_t dim = hamiltonian.dim();
  if (dim == 0) fail(ErrorCode::InvalidArgument, "empty operator");

  auto first = lowest_eigenpair(hamiltonian, random_start(dim, options.seed), {}, options);
  if (!first.found) {
    fail(ErrorCode::NotConverged, "ground-state Lanczos did not converge");
  }

  GroundState gs;
  gs.energy = first.value;
  gs.state = StateVector(std::move(first.vector));

  auto hx = hamiltonian.apply(gs.state.view());
  axpy(-gs.energy, gs.state.view(), hx);
  gs.residual = vnorm(hx);
  if (!(gs.residual < options.residual_tolerance)) {
    std::ostringstream msg;
    msg << "ground-state residual " << gs.residual << " above " << options.residual_tolerance;
    fail(ErrorCode::NotConverged, msg.str());
  }

  if (dim == 1) {
    gs.first_excited = std::numeric_limits<double>::infinity();
    return gs;
  }
  const std::vector<const std::vector<Complex>*> deflate{&gs.state.amplitudes};
  const auto second =
      lowest_eigenpair(hamiltonian, random_start(dim, options.seed + 1), deflate, options);
  if (!second.found) {
    fail(ErrorCode::NotConverged, "first-excited Lanczos did not converge");
  }
  gs.first_excited = second.value;
  if (!(gs.first_excited - gs.energy > options.gap_tolerance)) {
    std::ostringstream msg;
    msg << "ground state is degenerate within " << options.gap_tolerance
        << " (gap " << gs.first_excited - gs.energy << ")";
    fail(ErrorCode::DegenerateGroundState, msg.str());
  }
  return gs;
}

}  // namespace qzv
