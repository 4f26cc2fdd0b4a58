#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qzvalve/config.hpp"
#include "qzvalve/oracle.hpp"

namespace qzv {

const char* version() noexcept;

inline constexpr double kNearResonanceThreshold = 0.25;

struct FileDigest {
  std::string path;  // relative to the output directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

std::string sha256_file(const std::filesystem::path& path);

struct RunSummary {
  std::size_t runs = 0;
  std::size_t trajectories = 0;
  std::size_t failures = 0;
  double wall_clock_seconds = 0.0;
  std::vector<FileDigest> files;
  std::string text;
};

// Runs every ensemble of the config and writes CSV tables plus manifest.json
// into `out_dir`. Trajectory failures are reported in the summary; the
// remaining outputs are still written.
RunSummary run_command(const RunConfig& config, const std::filesystem::path& out_dir);

struct ValidationEntry {
  double M = 0.0;
  std::size_t dim = 0;
  double memory_bytes = 0.0;
  double detuning_half = 0.0;  // n = 0.5
  double detuning_full = 0.0;  // n = 1
  bool near_resonant = false;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  std::string text;
};

// No simulation. Throws SectorTooLarge when a sector exceeds limits.max_dim.
ValidationReport validate_command(const RunConfig& config);

struct OracleEntry {
  double M = 0.0;
  OracleDeviation dense;
  std::optional<ReferenceDeviation> chain_reference;  // M = 0 only
};

struct OracleReport {
  std::vector<OracleEntry> entries;
  std::string text;
};

OracleReport oracle_command(const RunConfig& config);

}  // namespace qzv
