#pragma once

#include <span>

namespace qzv {

// Static two-level picture: the ancilla feels the potential M*n of the
// chain site it is attached to.
struct RabiPrediction {
  double frequency = 0.0;  // Omega = sqrt(J^2 + M^2 n^2)
  double amplitude = 0.0;  // J^2 / (2 Omega^2)
  double n_assumed = 0.0;
};

RabiPrediction rabi_prediction(double J, double M, double n);
double rabi_frequency(double J, double M, double n);
double rabi_amplitude(double J, double M, double n);

// n_a(t) = 1 - A (1 - cos Omega t), starting from n_a(0) = 1.
double predict_ancilla_density(double J, double M, double n, double t);

// min over positive integers k of |Omega dT - 2 pi k|.
double resonance_detuning(double J, double M, double n, double period);

struct AncillaSample {
  double t;   // time since the window-opening projection
  double na;
};

// Least-squares chain density n in [0, 1] reproducing the ancilla samples of
// one measurement window. Only windows opened by an outcome-1 projection are
// meaningful; others raise NotApplicable. Needs at least 5 samples.
double reconstruct_density(std::span<const AncillaSample> samples, double J, double M,
                           int window_outcome = 1);

}  // namespace qzv
