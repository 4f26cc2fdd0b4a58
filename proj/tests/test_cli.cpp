// Runs the qzv executable and checks exit codes and outputs.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string output;
};

Result qzv(const std::string& args) {
  const auto log = fs::temp_directory_path() / "qzv_test_cli.log";
  const std::string cmd = std::string(QZV_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream s;
  s << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

fs::path write(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

std::string config(const std::string& name) { return std::string(QZV_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("validate") {
  const auto ok = qzv("validate --config " + config("zeno-valve.json"));
  CHECK(ok.code == 0);
  CHECK(ok.output.find("dim 1848") != std::string::npos);
  CHECK(ok.output.find("0.041370") != std::string::npos);
  CHECK(ok.output.find("NEAR-RESONANT") != std::string::npos);

  const auto big = write("qzv_cli_big.json", R"({"geometry": {"L": 30, "ancillas": "all"}})");
  const auto rejected = qzv("validate --config " + big.string());
  CHECK(rejected.code == 2);
  CHECK(rejected.output.find("sector too large") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2") {
  const auto bad = write("qzv_cli_bad.json", R"({"geometry": {"L": 6}, "model": {"dT": -1}})");
  const auto r = qzv("validate --config " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.output.find("model.dT") != std::string::npos);
  CHECK(qzv("run --config /nonexistent.json").code == 2);
  CHECK(qzv("run").code == 2);
  CHECK(qzv("frobnicate --config x").code == 2);
}

TEST_CASE("oracle") {
  const auto r = qzv("oracle --config " + config("oracle-small.json"));
  CHECK(r.code == 0);
  CHECK(r.output.find("chain-only reference") != std::string::npos);
  const auto too_big = qzv("oracle --config " + config("all-sites.json"));
  CHECK(too_big.code == 2);
}

TEST_CASE("run with seed override is reproducible") {
  const auto a = fs::temp_directory_path() / "qzv_cli_run_a";
  const auto b = fs::temp_directory_path() / "qzv_cli_run_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const auto cfg = config("oracle-small.json");
  REQUIRE(qzv("run --config " + cfg + " --out " + a.string() + " --seed 123 --workers 1").code == 0);
  REQUIRE(qzv("run --config " + cfg + " --out " + b.string() + " --seed 123 --workers 2").code == 0);
  const auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  CHECK(read(a / "M_3" / "traj_0000_records.csv") == read(b / "M_3" / "traj_0000_records.csv"));
  CHECK(read(a / "manifest.json").find("\"seed\": 123") != std::string::npos);
}
