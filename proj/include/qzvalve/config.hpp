#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qzvalve/trajectory.hpp"

namespace qzv {

struct OutputOptions {
  bool per_trajectory = true;
  bool rabi_table = false;      // n_a(t) over the first window vs. mean field
  bool reconstruction = false;  // per-window density reconstruction table
};

// A parsed configuration document. `model.M` may be a list, in which case
// every value becomes its own run.
struct RunConfig {
  std::string name;
  std::string source;  // canonical JSON echo of the input document
  std::vector<ProtocolConfig> runs;
  bool coupling_sweep = false;
  OutputOptions output;

  void set_seed(std::uint64_t seed);
  void set_workers(unsigned workers);
};

// Throws ErrorCode::Config with a "section.field: reason" message.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config_file(const std::filesystem::path& path);

}  // namespace qzv
