#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qzvalve/error.hpp"
#include "qzvalve/meanfield.hpp"

using namespace qzv;

TEST_CASE("two-level prediction") {
  CHECK(rabi_frequency(1, 0, 1) == doctest::Approx(1.0));
  CHECK(rabi_amplitude(1, 0, 1) == doctest::Approx(0.5));
  CHECK(rabi_frequency(1, 5, 1) == doctest::Approx(std::sqrt(26.0)));
  CHECK(rabi_amplitude(1, 5, 1) == doctest::Approx(1.0 / 52.0));
  CHECK(rabi_amplitude(1, 5, 1) == doctest::Approx(0.019230769230769232).epsilon(1e-15));
  const auto p = rabi_prediction(1, 3, 0.5);
  CHECK(p.frequency == doctest::Approx(std::sqrt(1 + 2.25)));
  CHECK(p.n_assumed == 0.5);
  for (double t : {0.0, 0.3, 1.0, 2.0}) {
    // M = 0 is the free Rabi oscillation cos^2(J t / 2).
    CHECK(predict_ancilla_density(1, 0, 1, t) == doctest::Approx(std::pow(std::cos(t / 2), 2)).epsilon(1e-15));
  }
  try {
    rabi_amplitude(1, 1, 1.5);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("resonance detuning") {
  CHECK(resonance_detuning(1, 3, 1, 2) == doctest::Approx(0.041370013157172814).epsilon(1e-14));
  CHECK(resonance_detuning(1, 3, 1, 2) == doctest::Approx(std::abs(2 * std::sqrt(10.0) - 2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(resonance_detuning(1, 6, 1, 1) == doctest::Approx(0.2004227768813669).epsilon(1e-14));
  CHECK(resonance_detuning(1, 6, 1, 1) < 0.25);
  // Omega dT below pi is closest to k = 1.
  CHECK(resonance_detuning(1, 0, 1, 2) == doctest::Approx(2 * std::numbers::pi - 2));
}

TEST_CASE("density reconstruction inverts the prediction") {
  for (double n : {0.0, 0.2, 0.5, 0.73, 1.0}) {
    std::vector<AncillaSample> samples;
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.1 * i;
      samples.push_back({t, predict_ancilla_density(1, 5, n, t)});
    }
    CHECK(reconstruct_density(samples, 1, 5) == doctest::Approx(n).epsilon(1e-6));
  }
}

TEST_CASE("reconstruction preconditions") {
  std::vector<AncillaSample> few{{0, 1}, {0.1, 1}, {0.2, 1}};
  const auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code([&] { reconstruct_density(few, 1, 5); }) == ErrorCode::InsufficientData);
  std::vector<AncillaSample> enough(6, {0.0, 1.0});
  CHECK(code([&] { reconstruct_density(enough, 1, 5, 0); }) == ErrorCode::NotApplicable);
}
