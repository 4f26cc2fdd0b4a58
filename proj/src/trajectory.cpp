#include "qzvalve/trajectory.hpp"

#include "qzvalve/meanfield.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace qzv {

std::vector<int> GeometrySpec::ancilla_sites() const {
  const int L = chain_length;
  switch (placement) {
    case AncillaPlacement::None: return {};
    case AncillaPlacement::Single: return {L / 2};
    case AncillaPlacement::Double: return {L / 2, L / 2 + 1};
    case AncillaPlacement::AllSites: {
      std::vector<int> s(static_cast<std::size_t>(std::max(L, 0)));
      for (int i = 0; i < L; ++i) s[static_cast<std::size_t>(i)] = i + 1;
      return s;
    }
    case AncillaPlacement::Custom: return custom_sites;
  }
  return {};
}

void ProtocolConfig::validate() const {
  if (geometry.chain_length < 2 || geometry.chain_length % 2 != 0) {
    fail(ErrorCode::Config, "geometry.L: must be even and >= 2");
  }
  params.validate();
  if (trajectories < 1) fail(ErrorCode::Config, "ensemble.trajectories: must be >= 1");
  if (mode == ProjectionMode::Soft) {
    if (!(soft.strength > 0.0)) fail(ErrorCode::Config, "measurement.soft.strength: must be > 0");
    if (!(soft.eta > 0.0)) fail(ErrorCode::Config, "measurement.soft.eta: must be > 0");
    if (soft.substeps < 1) fail(ErrorCode::Config, "measurement.soft.substeps: must be >= 1");
  }
  try {
    (void)geometry.build();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SectorTooLarge) throw;
    fail(ErrorCode::Config, std::string("geometry.ancillas: ") + e.what());
  }
}

namespace {

Bits domain_wall_bits(const SystemGeometry& g) {
  Bits bits = 0;
  for (int s = 1; s <= g.half_filling(); ++s) bits |= Bits{1} << g.chain_position(s);
  for (int k = 0; k < g.n_ancillas(); ++k) bits |= Bits{1} << g.ancilla_lower_position(k);
  return bits;
}

}  // namespace

StateVector prepare_chain_state(const ProtocolConfig& config, const SystemGeometry& chain_geometry,
                                const BasisSector& chain_basis) {
  if (chain_geometry.n_ancillas() != 0) {
    fail(ErrorCode::InvalidArgument, "chain state needs a geometry without ancillas");
  }
  if (config.initial_state == InitialState::DomainWall) {
    return StateVector::basis_state(chain_basis.dim(),
                                    *chain_basis.index_of(domain_wall_bits(chain_geometry)));
  }
  const auto h = build_chain_hamiltonian(config.params, chain_geometry, chain_basis);
  return ground_state(h).state;
}

StateVector prepare_initial_state(const ProtocolConfig& config, const SystemGeometry& geometry,
                                  const BasisSector& basis) {
  if (config.initial_state == InitialState::DomainWall) {
    const auto idx = basis.index_of(domain_wall_bits(geometry));
    if (!idx) fail(ErrorCode::InvalidArgument, "domain wall outside the sector");
    return StateVector::basis_state(basis.dim(), *idx);
  }
  const SystemGeometry chain_geometry(geometry.chain_length(), {});
  const auto chain_basis = BasisSector::enumerate(chain_geometry, config.max_dim);
  const auto chain_state = prepare_chain_state(config, chain_geometry, chain_basis);

  Bits ancilla_bits = 0;
  for (int k = 0; k < geometry.n_ancillas(); ++k) {
    ancilla_bits |= Bits{1} << geometry.ancilla_lower_position(k);
  }
  StateVector psi(basis.dim());
  for (std::size_t c = 0; c < chain_basis.dim(); ++c) {
    const Bits cb = chain_basis.state(c);
    Bits bits = ancilla_bits;
    for (int s = 1; s <= geometry.chain_length(); ++s) {
      if (occupation(cb, chain_geometry.chain_position(s))) bits |= Bits{1} << geometry.chain_position(s);
    }
    psi.amplitudes[*basis.index_of(bits)] = chain_state.amplitudes[c];
  }
  psi.normalize();
  return psi;
}

System::System(const ProtocolConfig& config)
    : geometry_(config.geometry.build()),
      basis_(BasisSector::enumerate(geometry_, config.max_dim)),
      hamiltonian_(build_total_hamiltonian(config.params, geometry_, basis_)),
      entropy_(geometry_, basis_),
      initial_(prepare_initial_state(config, geometry_, basis_)) {}

namespace {

void record_sample(ObservableSeries& series, double t, const StateVector& psi,
                   const SystemGeometry& g, const BasisSector& basis,
                   const EntropyCalculator& entropy) {
  series.times.push_back(t);
  series.site_densities.push_back(site_densities(psi, g, basis));
  series.ancilla_densities.push_back(ancilla_densities(psi, g, basis));
  series.entropy.push_back(entropy.entropy(psi));
  series.imbalance.push_back(imbalance(series.site_densities.back()));
}

StateFingerprint fingerprint(const StateVector& psi, const SystemGeometry& g,
                             const BasisSector& basis) {
  StateFingerprint f;
  f.norm = psi.norm();
  const auto n = site_densities(psi, g, basis);
  for (double x : n) f.chain_particles += x;
  f.ancilla_occupancy = ancilla_occupancies(psi, g, basis);
  return f;
}

void track_drift(TrajectoryResult& r, const StateFingerprint& f, int half_filling) {
  r.max_particle_drift = std::max(r.max_particle_drift, std::abs(f.chain_particles - half_filling));
  for (double occ : f.ancilla_occupancy) {
    r.max_ancilla_drift = std::max(r.max_ancilla_drift, std::abs(occ - 1.0));
  }
}

}  // namespace

TrajectoryResult run_trajectory(const System& system, const ProtocolConfig& config,
                                std::size_t index, const StateObserver& observer) {
  const auto& g = system.geometry();
  const auto& basis = system.basis();
  const auto& params = config.params;
  const int spp = params.steps_per_period();
  const int total = params.total_steps();
  const double step_dt = params.period / spp;

  TrajectoryResult result;
  result.index = index;
  result.seed = trajectory_seed(config.base_seed, index);
  TrajectoryRng rng(result.seed);

  StateVector psi = system.initial_state();
  KrylovPropagator propagator(system.hamiltonian(), config.krylov);

  const auto sample = [&](ObservableSeries& series, double t, SamplePoint point) {
    record_sample(series, t, psi, g, basis, system.entropy());
    track_drift(result, fingerprint(psi, g, basis), g.half_filling());
    if (observer) observer(t, point, psi);
  };

  sample(result.series, 0.0, SamplePoint::Grid);
  for (int j = 1; j <= total; ++j) {
    const int cycle = (j - 1) / spp + 1;
    // Projection instants are exact multiples of dT.
    const double t = (j / spp) * params.period + (j % spp) * step_dt;
    try {
      propagator.step(psi, step_dt);
      if (config.measurements && j % spp == 0) {
        sample(result.pre_projection, t, SamplePoint::PreProjection);
        auto recs = measurement_sweep(psi, g, basis, rng, t, config.mode, config.soft);
        result.records.insert(result.records.end(), recs.begin(), recs.end());
      }
    } catch (const Error& e) {
      throw TrajectoryError(e.code(), cycle, e.what());
    }
    sample(result.series, t, SamplePoint::Grid);
  }
  result.xi = integrated_entropy(result.series);
  result.final_state = fingerprint(psi, g, basis);
  return result;
}

ObservableSeries run_chain_reference(const ProtocolConfig& config) {
  const SystemGeometry g(config.geometry.chain_length, {});
  const auto basis = BasisSector::enumerate(g, config.max_dim);
  const auto h = build_chain_hamiltonian(config.params, g, basis);
  const EntropyCalculator entropy(g, basis);
  StateVector psi = prepare_chain_state(config, g, basis);
  KrylovPropagator propagator(h, config.krylov);

  const int spp = config.params.steps_per_period();
  const int total = config.params.total_steps();
  const double step_dt = config.params.period / spp;
  ObservableSeries series;
  record_sample(series, 0.0, psi, g, basis, entropy);
  for (int j = 1; j <= total; ++j) {
    propagator.step(psi, step_dt);
    record_sample(series, (j / spp) * config.params.period + (j % spp) * step_dt, psi, g, basis,
                  entropy);
  }
  return series;
}

std::vector<Representative> sort_by_xi(std::span<const double> xi) {
  std::vector<std::size_t> order(xi.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xi[a] < xi[b]; });

  struct Quantile {
    const char* label;
    double percentile;
  };
  static constexpr Quantile kFive[] = {
      {"min", 0.0}, {"p25", 25.0}, {"median", 50.0}, {"p75", 75.0}, {"max", 100.0}};
  static constexpr Quantile kThree[] = {{"min", 0.0}, {"median", 50.0}, {"max", 100.0}};

  std::vector<Representative> reps;
  if (xi.empty()) return reps;
  const std::span<const Quantile> picks =
      xi.size() >= 5 ? std::span<const Quantile>(kFive) : std::span<const Quantile>(kThree);
  const auto R = static_cast<double>(xi.size());
  for (const auto& q : picks) {
    // Nearest rank: ceil(p/100 * R), at least 1.
    const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(q.percentile / 100.0 * R)));
    const std::size_t pos = order[rank - 1];
    reps.push_back({q.label, q.percentile, pos, xi[pos]});
  }
  return reps;
}

std::optional<double> branching_time(const ObservableSeries& series, double threshold) {
  if (series.entropy.empty()) return std::nullopt;
  const double level = series.entropy.front() + threshold;
  for (std::size_t i = 0; i < series.entropy.size(); ++i) {
    if (series.entropy[i] > level) return series.times[i];
  }
  return std::nullopt;
}

EnsembleResult aggregate(std::vector<TrajectoryResult> trajectories,
                         std::vector<TrajectoryFailure> failures) {
  std::sort(trajectories.begin(), trajectories.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  std::sort(failures.begin(), failures.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  EnsembleResult out;
  out.failures = std::move(failures);
  out.trajectories = std::move(trajectories);
  if (out.trajectories.empty()) return out;

  const auto& ref = out.trajectories.front().series;
  const std::size_t T = ref.size();
  const auto R = static_cast<double>(out.trajectories.size());
  std::vector<const ObservableSeries*> ptrs;
  for (const auto& t : out.trajectories) {
    if (t.series.size() != T) fail(ErrorCode::GridMismatch, "trajectories do not share a time grid");
    ptrs.push_back(&t.series);
  }

  out.times = ref.times;
  out.entropy_mean.assign(T, 0.0);
  out.entropy_variance.assign(T, 0.0);
  out.imbalance_mean.assign(T, 0.0);
  out.imbalance_band.assign(T, 0.0);
  out.density_mean.assign(T, std::vector<double>(ref.site_densities.front().size(), 0.0));
  out.ancilla_mean.assign(T, std::vector<double>(ref.ancilla_densities.front().size(), 0.0));
  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0, imb = 0.0, imb2 = 0.0;
    for (const auto* p : ptrs) {
      s += p->entropy[t];
      imb += p->imbalance[t];
      for (std::size_t i = 0; i < out.density_mean[t].size(); ++i) {
        out.density_mean[t][i] += p->site_densities[t][i] / R;
      }
      for (std::size_t k = 0; k < out.ancilla_mean[t].size(); ++k) {
        out.ancilla_mean[t][k] += p->ancilla_densities[t][k] / R;
      }
    }
    out.entropy_mean[t] = s / R;
    out.entropy_variance[t] = entropy_variance(ptrs, t);
    out.imbalance_mean[t] = imb / R;
    for (const auto* p : ptrs) {
      const double d = p->imbalance[t] - out.imbalance_mean[t];
      imb2 += d * d;
    }
    out.imbalance_band[t] = 2.0 * std::sqrt(imb2 / R) / std::sqrt(R);
  }

  std::vector<double> xi;
  for (const auto& t : out.trajectories) xi.push_back(t.xi);
  out.representatives = sort_by_xi(xi);
  return out;
}

EnsembleResult run_ensemble(const System& system, const ProtocolConfig& config) {
  const auto R = static_cast<std::size_t>(config.trajectories);
  unsigned workers = config.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : config.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, R));

  std::vector<std::optional<TrajectoryResult>> slots(R);
  std::vector<TrajectoryFailure> failures;
  std::mutex failure_mutex;
  std::atomic<std::size_t> next{0};

  const auto work = [&] {
    for (std::size_t i = next++; i < R; i = next++) {
      try {
        slots[i] = run_trajectory(system, config, i);
      } catch (const TrajectoryError& e) {
        std::lock_guard lock(failure_mutex);
        failures.push_back({i, e.cycle(), e.code(), e.what()});
      } catch (const Error& e) {
        std::lock_guard lock(failure_mutex);
        failures.push_back({i, 0, e.code(), e.what()});
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::vector<TrajectoryResult> done;
  for (auto& s : slots) {
    if (s) done.push_back(std::move(*s));
  }
  return aggregate(std::move(done), std::move(failures));
}

EnsembleResult run_ensemble(const ProtocolConfig& config) {
  config.validate();
  const System system(config);
  return run_ensemble(system, config);
}

std::vector<WindowReconstruction> reconstruct_windows(const TrajectoryResult& trajectory,
                                                      const ProtocolConfig& config,
                                                      const SystemGeometry& geometry, int ancilla) {
  if (ancilla < 0 || ancilla >= geometry.n_ancillas()) {
    fail(ErrorCode::InvalidArgument, "ancilla index out of range");
  }
  const int spp = config.params.steps_per_period();
  const int n_anc = geometry.n_ancillas();
  const int site = geometry.ancilla_chain_sites()[static_cast<std::size_t>(ancilla)] - 1;
  const auto& series = trajectory.series;
  const auto& pre = trajectory.pre_projection;

  std::vector<WindowReconstruction> out;
  for (std::size_t k = 0; k < pre.size(); ++k) {
    WindowReconstruction w;
    w.window = static_cast<int>(k);
    w.ancilla = ancilla;
    const std::size_t first = k * static_cast<std::size_t>(spp);
    if (first + static_cast<std::size_t>(spp) > series.size()) break;
    w.start = series.times[first];
    w.outcome = k == 0 ? 1 : trajectory.records[(k - 1) * n_anc + ancilla].outcome;

    std::vector<AncillaSample> samples;
    double n_sum = 0.0;
    for (std::size_t j = first; j < first + static_cast<std::size_t>(spp); ++j) {
      samples.push_back({series.times[j] - w.start, series.ancilla_densities[j][ancilla]});
      n_sum += series.site_densities[j][site];
    }
    samples.push_back({pre.times[k] - w.start, pre.ancilla_densities[k][ancilla]});
    n_sum += pre.site_densities[k][site];
    w.true_density = n_sum / static_cast<double>(samples.size());
    if (w.outcome == 1) {
      w.estimate = reconstruct_density(samples, config.params.J, config.params.M, w.outcome);
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace qzv
