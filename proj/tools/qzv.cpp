// Command-line front end; talks to the simulator through the C interface only.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "qzvalve/qzvalve.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int exit_code(qzv_status s) {
  switch (s) {
    case QZV_OK: return kExitOk;
    case QZV_ERR_CONFIG:
    case QZV_ERR_SECTOR_TOO_LARGE:
    case QZV_ERR_INVALID_ARGUMENT: return kExitConfig;
    default: return kExitRuntime;
  }
}

int report_error(qzv_status s) {
  std::fprintf(stderr, "error (%s): %s\n", qzv_status_string(s), qzv_last_error());
  return exit_code(s);
}

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
};

int with_config(const Options& opt, auto&& command) {
  qzv_config* cfg = nullptr;
  if (auto s = qzv_config_load_file(opt.config.c_str(), &cfg); s != QZV_OK) return report_error(s);
  if (opt.seed) qzv_config_set_seed(cfg, *opt.seed);
  if (opt.workers) qzv_config_set_workers(cfg, *opt.workers);
  qzv_report* report = nullptr;
  const qzv_status s = command(cfg, &report);
  if (report) std::fputs(qzv_report_text(report), stdout);
  qzv_report_free(report);
  qzv_config_free(cfg);
  return s == QZV_OK ? kExitOk : report_error(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stroboscopically measured hard-core boson chain with ancilla detectors"};
  app.set_version_flag("--version", std::string(qzv_version()));
  app.require_subcommand(1);

  Options opt;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Configuration file (JSON)")->required();
    sub->add_option("--workers", opt.workers, "Worker threads (0: one per hardware thread)");
    sub->add_option("--seed", opt.seed, "Base seed, overrides ensemble.seed");
  };
  auto* run = app.add_subcommand("run", "Run the ensembles and write CSV tables and a manifest");
  common(run);
  run->add_option("--out", opt.out, "Output directory")->capture_default_str();
  auto* validate = app.add_subcommand("validate", "Check a configuration without simulating");
  common(validate);
  auto* oracle = app.add_subcommand("oracle", "Compare Krylov evolution with dense evolution");
  common(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    return with_config(opt, [&](qzv_config* c, qzv_report** r) { return qzv_run(c, opt.out.c_str(), r); });
  }
  if (validate->parsed()) return with_config(opt, qzv_validate);
  return with_config(opt, qzv_oracle);
}
