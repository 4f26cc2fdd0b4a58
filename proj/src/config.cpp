#include "qzvalve/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace qzv {
namespace {

using nlohmann::json;

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::Config, where + ": must be an object");
}

void reject_unknown(const json& j, const std::string& where, std::set<std::string> known) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) {
      fail(ErrorCode::Config, (where.empty() ? key : where + "." + key) + ": unknown field");
    }
  }
}

double number(const json& j, const std::string& key, const std::string& where, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(ErrorCode::Config, where + "." + key + ": must be a number");
  return j[key].get<double>();
}

bool boolean(const json& j, const std::string& key, const std::string& where, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) fail(ErrorCode::Config, where + "." + key + ": must be a boolean");
  return j[key].get<bool>();
}

long long integer(const json& j, const std::string& key, const std::string& where, long long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) fail(ErrorCode::Config, where + "." + key + ": must be an integer");
  return j[key].get<long long>();
}

std::string text(const json& j, const std::string& key, const std::string& where,
                 const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) fail(ErrorCode::Config, where + "." + key + ": must be a string");
  return j[key].get<std::string>();
}

GeometrySpec parse_geometry(const json& j) {
  expect_object(j, "geometry");
  reject_unknown(j, "geometry", {"L", "ancillas"});
  GeometrySpec g;
  if (!j.contains("L")) fail(ErrorCode::Config, "geometry.L: required");
  g.chain_length = static_cast<int>(integer(j, "L", "geometry", 0));
  if (g.chain_length < 2 || g.chain_length % 2 != 0) {
    fail(ErrorCode::Config, "geometry.L: must be even and >= 2");
  }
  if (!j.contains("ancillas")) {
    g.placement = AncillaPlacement::Single;
    return g;
  }
  const auto& a = j["ancillas"];
  if (a.is_string()) {
    const auto s = a.get<std::string>();
    if (s == "none") g.placement = AncillaPlacement::None;
    else if (s == "single") g.placement = AncillaPlacement::Single;
    else if (s == "double") g.placement = AncillaPlacement::Double;
    else if (s == "all") g.placement = AncillaPlacement::AllSites;
    else fail(ErrorCode::Config, "geometry.ancillas: expected none|single|double|all or a site list, got '" + s + "'");
  } else if (a.is_array()) {
    g.placement = AncillaPlacement::Custom;
    for (const auto& s : a) {
      if (!s.is_number_integer()) fail(ErrorCode::Config, "geometry.ancillas: site list must hold integers");
      g.custom_sites.push_back(s.get<int>());
    }
  } else {
    fail(ErrorCode::Config, "geometry.ancillas: must be a string or an array of sites");
  }
  return g;
}

}  // namespace

void RunConfig::set_seed(std::uint64_t seed) {
  for (auto& r : runs) r.base_seed = seed;
}

void RunConfig::set_workers(unsigned workers) {
  for (auto& r : runs) r.workers = workers;
}

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Config, std::string("config: malformed JSON: ") + e.what());
  }
  expect_object(doc, "config");
  reject_unknown(doc, "", {"name", "description", "geometry", "model", "initial_state",
                           "measurement", "ensemble", "output", "limits"});

  ProtocolConfig base;
  RunConfig cfg;
  cfg.name = text(doc, "name", "config", "unnamed");
  base.name = cfg.name;
  if (!doc.contains("geometry")) fail(ErrorCode::Config, "geometry: required");
  base.geometry = parse_geometry(doc["geometry"]);

  std::vector<double> couplings{0.0};
  if (doc.contains("model")) {
    const auto& m = doc["model"];
    expect_object(m, "model");
    reject_unknown(m, "model", {"J", "U", "M", "dT", "t_final", "dt_obs"});
    base.params.J = number(m, "J", "model", 1.0);
    base.params.U = number(m, "U", "model", 1.0);
    base.params.period = number(m, "dT", "model", 2.0);
    base.params.t_final = number(m, "t_final", "model", base.params.period);
    base.params.dt_obs = number(m, "dt_obs", "model", 0.1);
    if (m.contains("M")) {
      const auto& mv = m["M"];
      if (mv.is_number()) {
        couplings = {mv.get<double>()};
      } else if (mv.is_array() && !mv.empty()) {
        couplings.clear();
        for (const auto& x : mv) {
          if (!x.is_number()) fail(ErrorCode::Config, "model.M: list entries must be numbers");
          couplings.push_back(x.get<double>());
        }
        cfg.coupling_sweep = true;
      } else {
        fail(ErrorCode::Config, "model.M: must be a number or a non-empty list of numbers");
      }
    }
  }

  const auto init = text(doc, "initial_state", "config", "domain_wall");
  if (init == "domain_wall") base.initial_state = InitialState::DomainWall;
  else if (init == "ground_state") base.initial_state = InitialState::GroundState;
  else fail(ErrorCode::Config, "initial_state: expected domain_wall|ground_state, got '" + init + "'");

  if (doc.contains("measurement")) {
    const auto& m = doc["measurement"];
    expect_object(m, "measurement");
    reject_unknown(m, "measurement", {"enabled", "mode", "soft"});
    base.measurements = boolean(m, "enabled", "measurement", true);
    const auto mode = text(m, "mode", "measurement", "hard");
    if (mode == "hard") base.mode = ProjectionMode::Hard;
    else if (mode == "soft") base.mode = ProjectionMode::Soft;
    else fail(ErrorCode::Config, "measurement.mode: expected hard|soft, got '" + mode + "'");
    if (m.contains("soft")) {
      const auto& s = m["soft"];
      expect_object(s, "measurement.soft");
      reject_unknown(s, "measurement.soft", {"strength", "eta", "substeps"});
      base.soft.strength = number(s, "strength", "measurement.soft", base.soft.strength);
      base.soft.eta = number(s, "eta", "measurement.soft", base.soft.eta);
      base.soft.substeps = static_cast<int>(integer(s, "substeps", "measurement.soft", base.soft.substeps));
    }
  }

  if (doc.contains("ensemble")) {
    const auto& e = doc["ensemble"];
    expect_object(e, "ensemble");
    reject_unknown(e, "ensemble", {"trajectories", "seed", "workers"});
    base.trajectories = static_cast<int>(integer(e, "trajectories", "ensemble", 1));
    if (e.contains("seed")) {
      if (!e["seed"].is_number_unsigned() && !(e["seed"].is_number_integer() && e["seed"].get<long long>() >= 0)) {
        fail(ErrorCode::Config, "ensemble.seed: must be an unsigned 64-bit integer");
      }
      base.base_seed = e["seed"].get<std::uint64_t>();
    }
    const auto workers = integer(e, "workers", "ensemble", 1);
    if (workers < 0) fail(ErrorCode::Config, "ensemble.workers: must be >= 0");
    base.workers = static_cast<unsigned>(workers);
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    expect_object(o, "output");
    reject_unknown(o, "output", {"per_trajectory", "rabi_table", "reconstruction"});
    cfg.output.per_trajectory = boolean(o, "per_trajectory", "output", true);
    cfg.output.rabi_table = boolean(o, "rabi_table", "output", false);
    cfg.output.reconstruction = boolean(o, "reconstruction", "output", false);
  }

  if (doc.contains("limits")) {
    const auto& l = doc["limits"];
    expect_object(l, "limits");
    reject_unknown(l, "limits", {"max_dim"});
    const auto cap = integer(l, "max_dim", "limits", static_cast<long long>(kDefaultMaxDim));
    if (cap < 1) fail(ErrorCode::Config, "limits.max_dim: must be >= 1");
    base.max_dim = static_cast<std::size_t>(cap);
  }

  for (double M : couplings) {
    ProtocolConfig run = base;
    run.params.M = M;
    run.validate();
    cfg.runs.push_back(std::move(run));
  }
  cfg.source = doc.dump(2);
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Config, "config: cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace qzv
