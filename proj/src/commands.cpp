#include "qzvalve/commands.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "csv.hpp"
#include "qzvalve/meanfield.hpp"

#ifndef QZV_VERSION
#define QZV_VERSION "0.0.0"
#endif

namespace qzv {
namespace fs = std::filesystem;
using nlohmann::json;

const char* version() noexcept { return QZV_VERSION; }

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

namespace {

std::string coupling_label(double M) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "M_%g", M);
  return buf;
}

std::string padded(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", i);
  return buf;
}

std::vector<std::string> indexed(const std::string& prefix, std::size_t n, int base = 1) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + base));
  return out;
}

std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class OutputDir {
 public:
  OutputDir(fs::path root, std::string sub) : root_(std::move(root)), sub_(std::move(sub)) {
    fs::create_directories(root_ / sub_);
  }
  fs::path path(const std::string& name) {
    names_.push_back(sub_.empty() ? name : sub_ + "/" + name);
    return root_ / names_.back();
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path root_;
  std::string sub_;
  std::vector<std::string> names_;
};

void write_series(OutputDir& dir, const std::string& stem, const ObservableSeries& s,
                  const SystemGeometry& g) {
  {
    csv::Writer w(dir.path(stem + "_entropy.csv"));
    w.header({"time", "S"});
    for (std::size_t i = 0; i < s.size(); ++i) w.field(s.times[i]).field(s.entropy[i]).end_row();
    w.close();
  }
  {
    csv::Writer w(dir.path(stem + "_densities.csv"));
    w.header(join({"time"}, indexed("n_", static_cast<std::size_t>(g.chain_length()))));
    for (std::size_t i = 0; i < s.size(); ++i) w.field(s.times[i]).fields(s.site_densities[i]).end_row();
    w.close();
  }
  if (g.n_ancillas() > 0) {
    std::vector<std::string> cols{"time"};
    for (int site : g.ancilla_chain_sites()) cols.push_back("na_" + std::to_string(site));
    csv::Writer w(dir.path(stem + "_ancilla.csv"));
    w.header(cols);
    for (std::size_t i = 0; i < s.size(); ++i) w.field(s.times[i]).fields(s.ancilla_densities[i]).end_row();
    w.close();
  }
  {
    csv::Writer w(dir.path(stem + "_imbalance.csv"));
    w.header({"time", "I"});
    for (std::size_t i = 0; i < s.size(); ++i) w.field(s.times[i]).field(s.imbalance[i]).end_row();
    w.close();
  }
}

void write_trajectory(OutputDir& dir, const TrajectoryResult& tr, const SystemGeometry& g) {
  const std::string stem = "traj_" + padded(tr.index);
  write_series(dir, stem, tr.series, g);
  const auto& sites = g.ancilla_chain_sites();
  csv::Writer w(dir.path(stem + "_records.csv"));
  w.header({"time", "ancilla", "site", "p1", "outcome", "pre_na", "mode"});
  for (const auto& r : tr.records) {
    w.field(r.time)
        .field(static_cast<long long>(r.ancilla))
        .field(static_cast<long long>(sites[static_cast<std::size_t>(r.ancilla)]))
        .field(r.p1)
        .field(static_cast<long long>(r.outcome))
        .field(r.pre_projection_na)
        .field(to_string(r.mode))
        .end_row();
  }
  w.close();

  const auto& pre = tr.pre_projection;
  csv::Writer p(dir.path(stem + "_preproj.csv"));
  std::vector<std::string> cols{"time", "S", "I"};
  for (int site : sites) cols.push_back("na_" + std::to_string(site));
  p.header(cols);
  for (std::size_t i = 0; i < pre.size(); ++i) {
    p.field(pre.times[i]).field(pre.entropy[i]).field(pre.imbalance[i]).fields(pre.ancilla_densities[i]).end_row();
  }
  p.close();
}

void write_ensemble(OutputDir& dir, const EnsembleResult& e, const SystemGeometry& g) {
  {
    csv::Writer w(dir.path("ens_entropy.csv"));
    w.header({"time", "S_avg", "var_S"});
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      w.field(e.times[i]).field(e.entropy_mean[i]).field(e.entropy_variance[i]).end_row();
    }
    w.close();
  }
  {
    csv::Writer w(dir.path("ens_imbalance.csv"));
    w.header({"time", "I_avg", "I_band"});
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      w.field(e.times[i]).field(e.imbalance_mean[i]).field(e.imbalance_band[i]).end_row();
    }
    w.close();
  }
  {
    csv::Writer w(dir.path("ens_densities.csv"));
    w.header(join({"time"}, indexed("n_", static_cast<std::size_t>(g.chain_length()))));
    for (std::size_t i = 0; i < e.times.size(); ++i) w.field(e.times[i]).fields(e.density_mean[i]).end_row();
    w.close();
  }
  if (g.n_ancillas() > 0) {
    std::vector<std::string> cols{"time"};
    for (int site : g.ancilla_chain_sites()) cols.push_back("na_" + std::to_string(site));
    csv::Writer w(dir.path("ens_ancilla.csv"));
    w.header(cols);
    for (std::size_t i = 0; i < e.times.size(); ++i) w.field(e.times[i]).fields(e.ancilla_mean[i]).end_row();
    w.close();
  }
  {
    std::vector<std::string> cols{"time", "S_avg", "var_S"};
    for (const auto& r : e.representatives) cols.push_back("S_" + r.label);
    csv::Writer w(dir.path("ens_statistics.csv"));
    w.header(cols);
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      w.field(e.times[i]).field(e.entropy_mean[i]).field(e.entropy_variance[i]);
      for (const auto& r : e.representatives) w.field(e.trajectories[r.position].series.entropy[i]);
      w.end_row();
    }
    w.close();
  }
  {
    csv::Writer w(dir.path("ens_representatives.csv"));
    w.header({"label", "percentile", "trajectory", "seed", "xi"});
    for (const auto& r : e.representatives) {
      const auto& tr = e.trajectories[r.position];
      w.field(r.label).field(r.percentile).field(static_cast<long long>(tr.index))
          .field(std::to_string(tr.seed)).field(r.xi).end_row();
    }
    w.close();
  }
  {
    csv::Writer w(dir.path("ens_trajectories.csv"));
    w.header({"trajectory", "seed", "xi", "branching_time", "S_final"});
    for (const auto& tr : e.trajectories) {
      const auto tb = branching_time(tr.series);
      w.field(static_cast<long long>(tr.index)).field(std::to_string(tr.seed)).field(tr.xi)
          .field(tb ? *tb : std::numeric_limits<double>::infinity())
          .field(tr.series.entropy.empty() ? 0.0 : tr.series.entropy.back())
          .end_row();
    }
    w.close();
  }
  if (!e.failures.empty()) {
    csv::Writer w(dir.path("failures.csv"));
    w.header({"trajectory", "cycle", "code", "message"});
    for (const auto& f : e.failures) {
      std::string msg = f.message;
      for (char& c : msg) {
        if (c == ',' || c == '\n') c = ' ';
      }
      w.field(static_cast<long long>(f.index)).field(static_cast<long long>(f.cycle))
          .field(to_string(f.code)).field(msg).end_row();
    }
    w.close();
  }
}

// n_a over the first window next to the mean-field prediction for the
// initial density of the attached site.
void write_rabi(OutputDir& dir, const TrajectoryResult& tr, const ProtocolConfig& cfg,
                const SystemGeometry& g) {
  const auto& s = tr.series;
  const auto spp = static_cast<std::size_t>(cfg.params.steps_per_period());
  const auto& sites = g.ancilla_chain_sites();
  std::vector<std::string> cols{"time"};
  for (int site : sites) {
    cols.push_back("na_" + std::to_string(site));
    cols.push_back("na_meanfield_" + std::to_string(site));
  }
  csv::Writer w(dir.path("rabi.csv"));
  w.header(cols);
  const auto row = [&](double t, const std::vector<double>& na) {
    w.field(t);
    for (std::size_t k = 0; k < sites.size(); ++k) {
      const double n0 = s.site_densities[0][static_cast<std::size_t>(sites[k] - 1)];
      w.field(na[k]).field(predict_ancilla_density(cfg.params.J, cfg.params.M, n0, t));
    }
    w.end_row();
  };
  for (std::size_t i = 0; i < std::min(spp, s.size()); ++i) row(s.times[i], s.ancilla_densities[i]);
  if (!tr.pre_projection.times.empty()) {
    row(tr.pre_projection.times[0], tr.pre_projection.ancilla_densities[0]);
  } else if (spp < s.size()) {
    row(s.times[spp], s.ancilla_densities[spp]);
  }
  w.close();
}

void write_reconstruction(OutputDir& dir, const TrajectoryResult& tr, const ProtocolConfig& cfg,
                          const SystemGeometry& g) {
  csv::Writer w(dir.path("reconstruction.csv"));
  w.header({"time", "window", "site", "outcome", "true_n", "reconstructed_n", "abs_error"});
  for (int k = 0; k < g.n_ancillas(); ++k) {
    for (const auto& win : reconstruct_windows(tr, cfg, g, k)) {
      const double est = win.estimate.value_or(std::nan(""));
      w.field(win.start).field(static_cast<long long>(win.window))
          .field(static_cast<long long>(g.ancilla_chain_sites()[static_cast<std::size_t>(k)]))
          .field(static_cast<long long>(win.outcome)).field(win.true_density).field(est)
          .field(std::abs(est - win.true_density)).end_row();
    }
  }
  w.close();
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::size_t checked_dimension(const ProtocolConfig& run) {
  const auto g = run.geometry.build();
  const double dim = sector_dimension_estimate(g);
  if (dim > static_cast<double>(run.max_dim)) {
    fail(ErrorCode::SectorTooLarge,
         format("sector dimension %.0f exceeds limits.max_dim = %zu (L = %d, %d ancillas)", dim,
                run.max_dim, g.chain_length(), g.n_ancillas()));
  }
  return static_cast<std::size_t>(dim);
}

json config_echo(const RunConfig& config) {
  json echo = json::parse(config.source);
  if (!config.runs.empty()) {
    echo["ensemble"]["seed"] = config.runs.front().base_seed;
    echo["ensemble"]["workers"] = config.runs.front().workers;
  }
  return echo;
}

}  // namespace

RunSummary run_command(const RunConfig& config, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& run : config.runs) checked_dimension(run);
  fs::create_directories(out_dir);

  RunSummary summary;
  json runs = json::array();
  std::vector<std::string> written;
  std::ostringstream text;
  for (const auto& run : config.runs) {
    OutputDir dir(out_dir, config.coupling_sweep ? coupling_label(run.params.M) : "");
    const System system(run);
    const auto e = run_ensemble(system, run);
    const auto& g = system.geometry();
    if (config.output.per_trajectory) {
      for (const auto& tr : e.trajectories) write_trajectory(dir, tr, g);
    }
    write_ensemble(dir, e, g);
    if (!e.trajectories.empty() && g.n_ancillas() > 0) {
      if (config.output.rabi_table) write_rabi(dir, e.trajectories.front(), run, g);
      if (config.output.reconstruction && run.measurements) {
        write_reconstruction(dir, e.trajectories.front(), run, g);
      }
    }

    json seeds = json::array();
    for (int i = 0; i < run.trajectories; ++i) {
      seeds.push_back(trajectory_seed(run.base_seed, static_cast<std::uint64_t>(i)));
    }
    json failures = json::array();
    for (const auto& f : e.failures) {
      failures.push_back({{"trajectory", f.index}, {"cycle", f.cycle}, {"code", to_string(f.code)},
                          {"message", f.message}});
    }
    runs.push_back({{"M", run.params.M},
                    {"directory", config.coupling_sweep ? coupling_label(run.params.M) : "."},
                    {"dim", system.basis().dim()},
                    {"base_seed", run.base_seed},
                    {"trajectory_seeds", seeds},
                    {"failures", failures}});
    written.insert(written.end(), dir.names().begin(), dir.names().end());
    summary.trajectories += e.trajectories.size();
    summary.failures += e.failures.size();
    ++summary.runs;

    text << format("M = %g: dim %zu, %zu/%d trajectories", run.params.M, system.basis().dim(),
                   e.trajectories.size(), run.trajectories);
    if (!e.entropy_mean.empty()) text << format(", S_avg(t_f) = %.6f", e.entropy_mean.back());
    text << '\n';
    for (const auto& f : e.failures) {
      text << format("  trajectory %zu failed at cycle %d (%s): %s\n", f.index, f.cycle,
                     to_string(f.code), f.message.c_str());
    }
  }

  for (const auto& name : written) {
    const auto p = out_dir / name;
    summary.files.push_back({name, fs::file_size(p), sha256_file(p)});
  }
  summary.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json files = json::array();
  for (const auto& f : summary.files) {
    files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  }
  const json manifest{{"name", config.name},
                      {"version", version()},
                      {"config", config_echo(config)},
                      {"base_seed", config.runs.empty() ? 0 : config.runs.front().base_seed},
                      {"runs", runs},
                      {"wall_clock_seconds", summary.wall_clock_seconds},
                      {"files", files}};
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing manifest.json");

  text << format("%zu files written to %s in %.2f s\n", summary.files.size() + 1,
                 out_dir.string().c_str(), summary.wall_clock_seconds);
  summary.text = text.str();
  return summary;
}

ValidationReport validate_command(const RunConfig& config) {
  ValidationReport report;
  std::ostringstream text;
  for (const auto& run : config.runs) {
    ValidationEntry e;
    e.M = run.params.M;
    e.dim = checked_dimension(run);
    const auto g = run.geometry.build();
    const double hops = g.chain_length() + g.n_ancillas();
    const double vectors = run.krylov.max_dim + 4.0;
    e.memory_bytes = static_cast<double>(e.dim) * (16.0 * vectors + 8.0 + 20.0 * hops);
    if (run.measurements && g.n_ancillas() > 0) {
      e.detuning_half = resonance_detuning(run.params.J, run.params.M, 0.5, run.params.period);
      e.detuning_full = resonance_detuning(run.params.J, run.params.M, 1.0, run.params.period);
      e.near_resonant = std::min(e.detuning_half, e.detuning_full) < kNearResonanceThreshold;
    }
    text << format("M = %g: L = %d, %d ancillas, dim %zu, memory ~%.1f MiB", e.M, g.chain_length(),
                   g.n_ancillas(), e.dim, e.memory_bytes / (1024.0 * 1024.0));
    if (run.measurements && g.n_ancillas() > 0) {
      text << format(", detuning %.6f (n = 0.5) %.6f (n = 1)%s", e.detuning_half, e.detuning_full,
                     e.near_resonant ? " NEAR-RESONANT" : "");
    }
    text << "\nOK\n";
    report.entries.push_back(e);
  }
  report.text = text.str();
  return report;
}

OracleReport oracle_command(const RunConfig& config) {
  OracleReport report;
  std::ostringstream text;
  for (const auto& run : config.runs) {
    checked_dimension(run);
    OracleEntry e;
    e.M = run.params.M;
    e.dense = dense_oracle_check(run);
    text << format("M = %g: dim %zu, %zu samples, max infidelity %.3e, entropy deviation %.3e "
                   "(same state) %.3e (dense path), density deviation %.3e\n",
                   e.M, e.dense.dim, e.dense.samples, e.dense.max_infidelity,
                   e.dense.max_entropy_method, e.dense.max_entropy_path, e.dense.max_density);
    if (run.params.M == 0.0) {
      const System system(run);
      e.chain_reference = chain_reference_check(run, run_trajectory(system, run, 0));
      text << format("  chain-only reference: density deviation %.3e, entropy deviation %.3e\n",
                     e.chain_reference->max_density, e.chain_reference->max_entropy);
    }
    report.entries.push_back(e);
  }
  report.text = text.str();
  return report;
}

}  // namespace qzv
