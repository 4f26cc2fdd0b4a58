#include "qzvalve/qzvalve.h"

#include <map>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "qzvalve/commands.hpp"

struct qzv_config {
  qzv::RunConfig config;
};

struct qzv_report {
  std::string text;
  std::vector<std::map<std::string, double>> metrics;
};

struct qzv_system {
  qzv::ProtocolConfig config;
  std::unique_ptr<qzv::System> system;
};

struct qzv_trajectory {
  qzv::TrajectoryResult result;
};

namespace {

thread_local std::string last_error;

qzv_status status_of(qzv::ErrorCode code) {
  using qzv::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return QZV_ERR_INVALID_ARGUMENT;
    case ErrorCode::Config: return QZV_ERR_CONFIG;
    case ErrorCode::SectorTooLarge: return QZV_ERR_SECTOR_TOO_LARGE;
    case ErrorCode::PropagationFailure: return QZV_ERR_PROPAGATION;
    case ErrorCode::ImpossibleOutcome: return QZV_ERR_IMPOSSIBLE_OUTCOME;
    case ErrorCode::VanishingBranch: return QZV_ERR_VANISHING_BRANCH;
    case ErrorCode::NotConverged: return QZV_ERR_NOT_CONVERGED;
    case ErrorCode::DegenerateGroundState: return QZV_ERR_DEGENERATE_GROUND_STATE;
    case ErrorCode::InsufficientData: return QZV_ERR_INSUFFICIENT_DATA;
    case ErrorCode::NotApplicable: return QZV_ERR_NOT_APPLICABLE;
    case ErrorCode::GridMismatch: return QZV_ERR_GRID_MISMATCH;
    case ErrorCode::Io: return QZV_ERR_IO;
    case ErrorCode::TrajectoryFailed: return QZV_ERR_TRAJECTORY_FAILED;
  }
  return QZV_ERR_INTERNAL;
}

template <class F>
qzv_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const qzv::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QZV_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QZV_ERR_INTERNAL;
  }
}

qzv_status missing(const char* what) {
  last_error = std::string(what) + " is null";
  return QZV_ERR_INVALID_ARGUMENT;
}

qzv_status copy_series(const qzv_trajectory* t, const std::vector<double>& values, double* out,
                       std::size_t capacity) {
  if (!t) return missing("trajectory");
  if (!out && capacity > 0) return missing("out");
  for (std::size_t i = 0; i < values.size() && i < capacity; ++i) out[i] = values[i];
  return QZV_OK;
}

}  // namespace

extern "C" {

const char* qzv_version(void) { return qzv::version(); }

const char* qzv_status_string(qzv_status status) {
  switch (status) {
    case QZV_OK: return "ok";
    case QZV_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QZV_ERR_CONFIG: return "configuration error";
    case QZV_ERR_SECTOR_TOO_LARGE: return "sector too large";
    case QZV_ERR_PROPAGATION: return "propagation failure";
    case QZV_ERR_IMPOSSIBLE_OUTCOME: return "impossible outcome";
    case QZV_ERR_VANISHING_BRANCH: return "vanishing branch";
    case QZV_ERR_NOT_CONVERGED: return "not converged";
    case QZV_ERR_DEGENERATE_GROUND_STATE: return "degenerate ground state";
    case QZV_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case QZV_ERR_NOT_APPLICABLE: return "not applicable";
    case QZV_ERR_GRID_MISMATCH: return "grid mismatch";
    case QZV_ERR_IO: return "i/o error";
    case QZV_ERR_TRAJECTORY_FAILED: return "trajectory failed";
    case QZV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qzv_last_error(void) { return last_error.c_str(); }

qzv_status qzv_config_load_file(const char* path, qzv_config** out) {
  if (!path) return missing("path");
  if (!out) return missing("out");
  return guarded([&] {
    *out = new qzv_config{qzv::load_config_file(path)};
    return QZV_OK;
  });
}

qzv_status qzv_config_load_string(const char* json, qzv_config** out) {
  if (!json) return missing("json");
  if (!out) return missing("out");
  return guarded([&] {
    *out = new qzv_config{qzv::parse_config(json)};
    return QZV_OK;
  });
}

void qzv_config_free(qzv_config* config) { delete config; }

qzv_status qzv_config_set_seed(qzv_config* config, uint64_t seed) {
  if (!config) return missing("config");
  config->config.set_seed(seed);
  return QZV_OK;
}

qzv_status qzv_config_set_workers(qzv_config* config, unsigned workers) {
  if (!config) return missing("config");
  config->config.set_workers(workers);
  return QZV_OK;
}

qzv_status qzv_config_run_count(const qzv_config* config, size_t* out) {
  if (!config) return missing("config");
  if (!out) return missing("out");
  *out = config->config.runs.size();
  return QZV_OK;
}

qzv_status qzv_run(const qzv_config* config, const char* out_dir, qzv_report** out) {
  if (!config) return missing("config");
  if (!out_dir) return missing("out_dir");
  if (!out) return missing("out");
  return guarded([&] {
    const auto summary = qzv::run_command(config->config, out_dir);
    auto report = std::make_unique<qzv_report>();
    report->text = summary.text;
    report->metrics.push_back({{"runs", static_cast<double>(summary.runs)},
                               {"trajectories", static_cast<double>(summary.trajectories)},
                               {"failures", static_cast<double>(summary.failures)},
                               {"files", static_cast<double>(summary.files.size())},
                               {"wall_clock_seconds", summary.wall_clock_seconds}});
    *out = report.release();
    if (summary.failures > 0) {
      last_error = std::to_string(summary.failures) + " trajectories failed";
      return QZV_ERR_TRAJECTORY_FAILED;
    }
    return QZV_OK;
  });
}

qzv_status qzv_validate(const qzv_config* config, qzv_report** out) {
  if (!config) return missing("config");
  if (!out) return missing("out");
  return guarded([&] {
    const auto v = qzv::validate_command(config->config);
    auto report = std::make_unique<qzv_report>();
    report->text = v.text;
    for (const auto& e : v.entries) {
      report->metrics.push_back({{"M", e.M},
                                 {"dim", static_cast<double>(e.dim)},
                                 {"memory_bytes", e.memory_bytes},
                                 {"detuning_half", e.detuning_half},
                                 {"detuning_full", e.detuning_full},
                                 {"near_resonant", e.near_resonant ? 1.0 : 0.0}});
    }
    *out = report.release();
    return QZV_OK;
  });
}

qzv_status qzv_oracle(const qzv_config* config, qzv_report** out) {
  if (!config) return missing("config");
  if (!out) return missing("out");
  return guarded([&] {
    const auto o = qzv::oracle_command(config->config);
    auto report = std::make_unique<qzv_report>();
    report->text = o.text;
    for (const auto& e : o.entries) {
      std::map<std::string, double> m{{"M", e.M},
                                      {"dim", static_cast<double>(e.dense.dim)},
                                      {"samples", static_cast<double>(e.dense.samples)},
                                      {"max_infidelity", e.dense.max_infidelity},
                                      {"max_entropy_method", e.dense.max_entropy_method},
                                      {"max_entropy_path", e.dense.max_entropy_path},
                                      {"max_density", e.dense.max_density}};
      if (e.chain_reference) {
        m["reference_density"] = e.chain_reference->max_density;
        m["reference_entropy"] = e.chain_reference->max_entropy;
      }
      report->metrics.push_back(std::move(m));
    }
    *out = report.release();
    return QZV_OK;
  });
}

const char* qzv_report_text(const qzv_report* report) { return report ? report->text.c_str() : ""; }

size_t qzv_report_run_count(const qzv_report* report) { return report ? report->metrics.size() : 0; }

qzv_status qzv_report_metric(const qzv_report* report, size_t run, const char* key, double* out) {
  if (!report) return missing("report");
  if (!key) return missing("key");
  if (!out) return missing("out");
  if (run >= report->metrics.size()) {
    last_error = "run index out of range";
    return QZV_ERR_INVALID_ARGUMENT;
  }
  const auto it = report->metrics[run].find(key);
  if (it == report->metrics[run].end()) {
    last_error = std::string("unknown metric '") + key + "'";
    return QZV_ERR_INVALID_ARGUMENT;
  }
  *out = it->second;
  return QZV_OK;
}

void qzv_report_free(qzv_report* report) { delete report; }

qzv_status qzv_system_create(const qzv_config* config, size_t run, qzv_system** out) {
  if (!config) return missing("config");
  if (!out) return missing("out");
  if (run >= config->config.runs.size()) {
    last_error = "run index out of range";
    return QZV_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto s = std::make_unique<qzv_system>();
    s->config = config->config.runs[run];
    s->system = std::make_unique<qzv::System>(s->config);
    *out = s.release();
    return QZV_OK;
  });
}

void qzv_system_free(qzv_system* system) { delete system; }

qzv_status qzv_system_dim(const qzv_system* system, size_t* out) {
  if (!system) return missing("system");
  if (!out) return missing("out");
  *out = system->system->basis().dim();
  return QZV_OK;
}

qzv_status qzv_trajectory_run(const qzv_system* system, size_t index, qzv_trajectory** out) {
  if (!system) return missing("system");
  if (!out) return missing("out");
  return guarded([&] {
    *out = new qzv_trajectory{qzv::run_trajectory(*system->system, system->config, index)};
    return QZV_OK;
  });
}

void qzv_trajectory_free(qzv_trajectory* trajectory) { delete trajectory; }

size_t qzv_trajectory_samples(const qzv_trajectory* trajectory) {
  return trajectory ? trajectory->result.series.size() : 0;
}

qzv_status qzv_trajectory_times(const qzv_trajectory* t, double* out, size_t capacity) {
  return t ? copy_series(t, t->result.series.times, out, capacity) : missing("trajectory");
}

qzv_status qzv_trajectory_entropy(const qzv_trajectory* t, double* out, size_t capacity) {
  return t ? copy_series(t, t->result.series.entropy, out, capacity) : missing("trajectory");
}

qzv_status qzv_trajectory_imbalance(const qzv_trajectory* t, double* out, size_t capacity) {
  return t ? copy_series(t, t->result.series.imbalance, out, capacity) : missing("trajectory");
}

qzv_status qzv_trajectory_xi(const qzv_trajectory* t, double* out) {
  if (!t) return missing("trajectory");
  if (!out) return missing("out");
  *out = t->result.xi;
  return QZV_OK;
}

qzv_status qzv_trajectory_seed(const qzv_trajectory* t, uint64_t* out) {
  if (!t) return missing("trajectory");
  if (!out) return missing("out");
  *out = t->result.seed;
  return QZV_OK;
}

size_t qzv_trajectory_record_count(const qzv_trajectory* t) { return t ? t->result.records.size() : 0; }

qzv_status qzv_trajectory_record(const qzv_trajectory* t, size_t i, double* time, int* ancilla,
                                 double* p1, int* outcome) {
  if (!t) return missing("trajectory");
  if (i >= t->result.records.size()) {
    last_error = "record index out of range";
    return QZV_ERR_INVALID_ARGUMENT;
  }
  const auto& r = t->result.records[i];
  if (time) *time = r.time;
  if (ancilla) *ancilla = r.ancilla;
  if (p1) *p1 = r.p1;
  if (outcome) *outcome = r.outcome;
  return QZV_OK;
}

}  // extern "C"
