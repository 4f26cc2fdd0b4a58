#pragma once

#include <random>

#include "qzvalve/state.hpp"

namespace testing {

inline qzv::StateVector random_state(std::size_t dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  qzv::StateVector v(dim);
  for (auto& z : v.amplitudes) z = {gauss(rng), gauss(rng)};
  v.normalize();
  return v;
}

inline double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing
