#include "qzvalve/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "qzvalve/dense.hpp"

namespace qzv {
namespace {

struct Snapshot {
  SamplePoint point;
  StateVector psi;
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

OracleDeviation dense_oracle_check(const ProtocolConfig& config, std::size_t index) {
  config.validate();
  const System system(config);
  const auto& g = system.geometry();
  const auto& basis = system.basis();
  if (basis.dim() > kDenseOracleMaxDim) {
    fail(ErrorCode::SectorTooLarge, "dense oracle needs dim <= " +
                                        std::to_string(kDenseOracleMaxDim) + ", got " +
                                        std::to_string(basis.dim()));
  }

  std::vector<Snapshot> snaps;
  const auto result = run_trajectory(system, config, index,
                                     [&](double, SamplePoint p, const StateVector& psi) {
                                       snaps.push_back({p, psi});
                                     });

  const DenseEvolution dense(system.hamiltonian());
  const double dt = config.params.period / config.params.steps_per_period();
  const int n_anc = g.n_ancillas();
  StateVector d = system.initial_state();
  std::size_t sweep = 0;
  bool after_pre = false;

  OracleDeviation dev;
  dev.dim = basis.dim();
  for (std::size_t s = 0; s < snaps.size(); ++s) {
    const auto& [point, psi] = snaps[s];
    if (s > 0) {
      if (point == SamplePoint::Grid && after_pre) {
        for (int k = 0; k < n_anc; ++k) {
          const auto& rec = result.records[sweep * n_anc + k];
          const double draw = rec.outcome == 1 ? 0.0 : 1.0;
          if (config.mode == ProjectionMode::Soft) {
            project_soft(d, g, basis, k, draw, config.soft, rec.time);
          } else {
            project_hard(d, g, basis, k, draw, rec.time);
          }
        }
        ++sweep;
      } else {
        d = dense.evolve(d, dt);
      }
    }
    after_pre = point == SamplePoint::PreProjection;

    dev.max_infidelity = std::max(dev.max_infidelity, 1.0 - fidelity(psi, d));
    const double s_block = system.entropy().entropy(psi);
    dev.max_entropy_method =
        std::max(dev.max_entropy_method, std::abs(s_block - dense_entanglement_entropy(psi, g, basis)));
    dev.max_entropy_path =
        std::max(dev.max_entropy_path, std::abs(s_block - dense_entanglement_entropy(d, g, basis)));
    dev.max_density = std::max(dev.max_density, max_abs_diff(site_densities(psi, g, basis),
                                                             site_densities(d, g, basis)));
    ++dev.samples;
  }
  return dev;
}

ReferenceDeviation chain_reference_check(const ProtocolConfig& config,
                                         const TrajectoryResult& trajectory) {
  const auto reference = run_chain_reference(config);
  const auto& series = trajectory.series;
  if (reference.size() != series.size()) {
    fail(ErrorCode::GridMismatch, "chain reference and trajectory grids differ");
  }
  ReferenceDeviation dev;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (std::abs(series.times[i] - reference.times[i]) > 1e-12) {
      fail(ErrorCode::GridMismatch, "chain reference and trajectory sample times differ");
    }
    dev.max_density = std::max(dev.max_density, max_abs_diff(series.site_densities[i],
                                                             reference.site_densities[i]));
    dev.max_entropy = std::max(dev.max_entropy, std::abs(series.entropy[i] - reference.entropy[i]));
  }
  return dev;
}

}  // namespace qzv
