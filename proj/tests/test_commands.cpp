#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qzvalve/commands.hpp"
#include "qzvalve/error.hpp"

using namespace qzv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qzv_test_commands_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmall = R"({
  "name": "small",
  "geometry": {"L": 6, "ancillas": "single"},
  "model": {"M": [0, 3], "dT": 2, "t_final": 6, "dt_obs": 0.1},
  "ensemble": {"trajectories": 5, "seed": 4},
  "output": {"rabi_table": true, "reconstruction": true}
})";

}  // namespace

TEST_CASE("run writes tables and a manifest with digests") {
  const auto out = scratch("run");
  const auto cfg = parse_config(kSmall);
  const auto summary = run_command(cfg, out);
  CHECK(summary.runs == 2);
  CHECK(summary.trajectories == 10);
  CHECK(summary.failures == 0);
  for (const char* f : {"ens_entropy.csv", "ens_imbalance.csv", "ens_densities.csv", "ens_ancilla.csv",
                        "ens_statistics.csv", "ens_representatives.csv", "traj_0000_records.csv",
                        "traj_0004_entropy.csv", "traj_0004_preproj.csv", "rabi.csv", "reconstruction.csv"}) {
    CHECK(fs::exists(out / "M_3" / f));
  }
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["config"]["name"] == "small");
  CHECK(manifest["base_seed"] == 4);
  CHECK(manifest["runs"].size() == 2);
  CHECK(manifest["runs"][1]["trajectory_seeds"].size() == 5);
  CHECK(manifest["runs"][1]["trajectory_seeds"][2].get<std::uint64_t>() == trajectory_seed(4, 2));
  CHECK(manifest["files"].size() == summary.files.size());
  for (const auto& f : manifest["files"]) {
    CHECK(sha256_file(out / f["path"].get<std::string>()) == f["sha256"]);
  }

  const auto header = slurp(out / "M_3" / "ens_statistics.csv").substr(0, 50);
  CHECK(header.rfind("time,S_avg,var_S,S_min,S_p25,S_median,S_p75,S_max\n", 0) == 0);
  const auto records = slurp(out / "M_3" / "traj_0000_records.csv");
  CHECK(records.rfind("time,ancilla,site,p1,outcome,pre_na,mode\n", 0) == 0);
  CHECK(records.find('\r') == std::string::npos);
  CHECK(std::count(records.begin(), records.end(), '\n') == 4);
}

TEST_CASE("a second run reproduces every table byte for byte") {
  const auto a = scratch("repro_a");
  const auto b = scratch("repro_b");
  auto cfg = parse_config(kSmall);
  const auto sa = run_command(cfg, a);
  cfg.set_workers(3);
  const auto sb = run_command(cfg, b);
  REQUIRE(sa.files.size() == sb.files.size());
  for (std::size_t i = 0; i < sa.files.size(); ++i) {
    CHECK(sa.files[i].path == sb.files[i].path);
    CHECK(sa.files[i].sha256 == sb.files[i].sha256);
  }
  cfg.set_seed(5);
  const auto sc = run_command(cfg, scratch("repro_c"));
  bool any_differs = false;
  for (std::size_t i = 0; i < sa.files.size(); ++i) any_differs |= sa.files[i].sha256 != sc.files[i].sha256;
  CHECK(any_differs);
}

TEST_CASE("sha256 of a known string") {
  const auto p = scratch("sha") ;
  fs::create_directories(p);
  std::ofstream(p / "abc.txt", std::ios::binary) << "abc";
  CHECK(sha256_file(p / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("validate reports dimensions and resonances") {
  const auto cfg = parse_config(R"({"geometry": {"L": 12}, "model": {"M": [1, 3], "dT": 2}})");
  const auto v = validate_command(cfg);
  REQUIRE(v.entries.size() == 2);
  CHECK(v.entries[0].dim == 1848);
  CHECK_FALSE(v.entries[0].near_resonant);
  CHECK(v.entries[1].near_resonant);
  CHECK(v.entries[1].detuning_full == doctest::Approx(0.041370013157172814));
  CHECK(v.entries[1].memory_bytes > 1848 * 16.0);
  CHECK(v.text.find("NEAR-RESONANT") != std::string::npos);

  const auto m6 = validate_command(parse_config(R"({"geometry": {"L": 8}, "model": {"M": 6, "dT": 1}})"));
  CHECK(m6.entries[0].near_resonant);
  CHECK(m6.entries[0].detuning_full == doctest::Approx(0.2004227768813669));
}

TEST_CASE("oversized sectors are rejected before allocation") {
  const auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of([] { parse_config(R"({"geometry": {"L": 30, "ancillas": "all"}})"); }) == ErrorCode::SectorTooLarge);
  const auto capped = parse_config(R"({"geometry": {"L": 12}, "limits": {"max_dim": 1000}})");
  CHECK(code_of([&] { validate_command(capped); }) == ErrorCode::SectorTooLarge);
  CHECK(code_of([&] { run_command(capped, scratch("capped")); }) == ErrorCode::SectorTooLarge);
  const auto big = parse_config(R"({"geometry": {"L": 8, "ancillas": "all"}})");
  CHECK(code_of([&] { oracle_command(big); }) == ErrorCode::SectorTooLarge);
}

TEST_CASE("oracle command on the smallest system") {
  const auto o = oracle_command(parse_config(R"({"geometry": {"L": 4}, "model": {"M": [0, 4], "dT": 2, "t_final": 10}})"));
  REQUIRE(o.entries.size() == 2);
  for (const auto& e : o.entries) {
    CHECK(e.dense.max_infidelity < 1e-9);
    CHECK(e.dense.max_entropy_method < 1e-10);
    CHECK(e.dense.samples == 106);
  }
  REQUIRE(o.entries[0].chain_reference.has_value());
  CHECK(o.entries[0].chain_reference->max_density < 1e-9);
  CHECK_FALSE(o.entries[1].chain_reference.has_value());
}
