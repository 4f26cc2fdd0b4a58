#include "qzvalve/meanfield.hpp"

#include <cmath>
#include <numbers>

#include "qzvalve/error.hpp"

namespace qzv {
namespace {

void check_density(double n) {
  if (!(n >= 0.0 && n <= 1.0)) fail(ErrorCode::InvalidArgument, "density must lie in [0, 1]");
}

}  // namespace

double rabi_frequency(double J, double M, double n) {
  check_density(n);
  return std::sqrt(J * J + M * M * n * n);
}

double rabi_amplitude(double J, double M, double n) {
  check_density(n);
  return 0.5 * J * J / (J * J + M * M * n * n);
}

RabiPrediction rabi_prediction(double J, double M, double n) {
  return {rabi_frequency(J, M, n), rabi_amplitude(J, M, n), n};
}

double predict_ancilla_density(double J, double M, double n, double t) {
  const auto p = rabi_prediction(J, M, n);
  return 1.0 - p.amplitude * (1.0 - std::cos(p.frequency * t));
}

double resonance_detuning(double J, double M, double n, double period) {
  const double phase = rabi_frequency(J, M, n) * period;
  const double k = std::max(1.0, std::round(phase / (2.0 * std::numbers::pi)));
  return std::abs(phase - 2.0 * std::numbers::pi * k);
}

double reconstruct_density(std::span<const AncillaSample> samples, double J, double M,
                           int window_outcome) {
  if (window_outcome != 1) {
    fail(ErrorCode::NotApplicable, "density reconstruction needs an outcome-1 window");
  }
  if (samples.size() < 5) {
    fail(ErrorCode::InsufficientData, "density reconstruction needs >= 5 samples");
  }
  const auto objective = [&](double n) {
    double r = 0.0;
    for (const auto& s : samples) {
      const double d = s.na - predict_ancilla_density(J, M, n, s.t);
      r += d * d;
    }
    return r;
  };

  // Coarse scan brackets the global minimum, golden section refines it.
  constexpr int kGrid = 200;
  int best = 0;
  double best_val = objective(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = objective(static_cast<double>(i) / kGrid);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(kGrid);
  double hi = std::min(kGrid, best + 1) / static_cast<double>(kGrid);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  // The edges of [0, 1] are not interior points of the golden-section search.
  double n_best = mid;
  double f_best = objective(mid);
  for (double edge : {0.0, 1.0}) {
    const double f = objective(edge);
    if (f < f_best) {
      f_best = f;
      n_best = edge;
    }
  }
  return n_best;
}

}  // namespace qzv
