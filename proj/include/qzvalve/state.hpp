#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <vector>

#include "qzvalve/sparse.hpp"

namespace qzv {

// Complex amplitudes over a BasisSector; the basis travels separately.
struct StateVector {
  std::vector<Complex> amplitudes;

  StateVector() = default;
  explicit StateVector(std::size_t dim) : amplitudes(dim, 0.0) {}
  explicit StateVector(std::vector<Complex> a) : amplitudes(std::move(a)) {}

  std::size_t dim() const noexcept { return amplitudes.size(); }
  std::span<const Complex> view() const noexcept { return amplitudes; }
  std::span<Complex> view() noexcept { return amplitudes; }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& z : amplitudes) s += std::norm(z);
    return s;
  }
  double norm() const noexcept { return std::sqrt(norm_squared()); }

  // Returns the norm before rescaling.
  double normalize() noexcept {
    const double n = norm();
    if (n > 0.0) {
      const double inv = 1.0 / n;
      for (auto& z : amplitudes) z *= inv;
    }
    return n;
  }

  static StateVector basis_state(std::size_t dim, std::size_t index) {
    StateVector s(dim);
    s.amplitudes[index] = 1.0;
    return s;
  }
};

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) noexcept {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// |<a|b>|^2 for normalized a, b.
inline double fidelity(const StateVector& a, const StateVector& b) noexcept {
  return std::norm(inner(a.view(), b.view()));
}

}  // namespace qzv
