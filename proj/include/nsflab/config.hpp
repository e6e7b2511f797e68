#pragma once

#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>

#include "nsflab/harness_types.hpp"
#include "nsflab/solver.hpp"

namespace nsflab {

// Full experiment description (documented key set; JSON on disk):
//   grid {d, n, box_len}
//   physics {lambda, mu, kappa, cv, rho_bar, T_bar, pressure{kind, ...}}
//   decay {s1, p, eps, j0, s_grid}
//   initial_data {kind, amplitude, width, seed}
//   solver {dt, t_end, scheme, cfl_safety, record{t0, q}, nonlinear}
//   outputs {dir}
//   mode: "linear" | "nonlinear" | "both"; radial: bool (grid-free studies)
struct ExperimentConfig {
  GridSpec grid;
  PhysicalParams physics;
  PressureLaw pressure = PressureLaw::perfect_gas(1.0);
  DecayParams decay;
  InitialDataSpec initial_data;
  SolverConfig solver;
  std::string output_dir = "out";
  std::string mode = "linear";
  bool radial = false;
  int threads = 0;  // 0 = library default
  nlohmann::json raw;  // resolved config, embedded into reports
};

namespace detail {
template <class T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
  if (j.contains(key)) return j.at(key).get<T>();
  return fallback;
}
}  // namespace detail

// Re-encodes a parsed config into the deterministic report writer.
inline JsonValue to_report_json(const nlohmann::json& j) {
  if (j.is_null()) return JsonValue();
  if (j.is_boolean()) return JsonValue(j.get<bool>());
  if (j.is_number_integer()) return JsonValue(j.get<long long>());
  if (j.is_number()) return JsonValue(j.get<double>());
  if (j.is_string()) return JsonValue(j.get<std::string>());
  if (j.is_array()) {
    JsonValue out = JsonValue::array();
    for (const auto& el : j) out.push_back(to_report_json(el));
    return out;
  }
  JsonValue out = JsonValue::object();
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = to_report_json(it.value());
  return out;
}

inline PressureLaw parse_pressure(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "perfect") return PressureLaw::perfect_gas(detail::get_or(j, "R", 1.0));
  if (kind == "vdw")
    return PressureLaw::van_der_waals(j.at("alpha").get<double>(), j.at("beta").get<double>(),
                                      j.at("delta").get<double>());
  if (kind == "poly")
    return PressureLaw::polynomial(j.at("pi0").get<std::vector<double>>(),
                                   j.at("pi1").get<std::vector<double>>());
  throw std::invalid_argument("pressure.kind must be 'perfect', 'vdw' or 'poly'");
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.raw = j;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    cfg.grid.d = detail::get_or(g, "d", 3);
    cfg.grid.n = detail::get_or(g, "n", 32);
    cfg.grid.box_len = detail::get_or(g, "box_len", 2.0 * kPi);
  }
  if (j.contains("physics")) {
    const auto& p = j.at("physics");
    cfg.physics.lambda = detail::get_or(p, "lambda", 0.0);
    cfg.physics.mu = detail::get_or(p, "mu", 0.5);
    cfg.physics.kappa = detail::get_or(p, "kappa", 1.0);
    cfg.physics.cv = detail::get_or(p, "cv", 1.0);
    cfg.physics.rho_bar = detail::get_or(p, "rho_bar", 1.0);
    cfg.physics.T_bar = detail::get_or(p, "T_bar", 1.0);
    if (p.contains("pressure")) cfg.pressure = parse_pressure(p.at("pressure"));
  }
  if (j.contains("decay")) {
    const auto& d = j.at("decay");
    cfg.decay.dim = cfg.grid.d;
    cfg.decay.s1 = detail::get_or(d, "s1", 1.5);
    cfg.decay.p = detail::get_or(d, "p", 2.0);
    cfg.decay.eps = detail::get_or(d, "eps", 0.01);
    cfg.decay.j0 = detail::get_or(d, "j0", 0);
    if (d.contains("s_grid")) cfg.decay.s_grid = d.at("s_grid").get<std::vector<double>>();
  } else {
    cfg.decay.dim = cfg.grid.d;
  }
  if (j.contains("initial_data")) {
    const auto& i = j.at("initial_data");
    const std::string kind = detail::get_or<std::string>(i, "kind", "gaussian");
    if (kind == "gaussian")
      cfg.initial_data.kind = InitialDataSpec::Kind::GaussianBump;
    else if (kind == "power")
      cfg.initial_data.kind = InitialDataSpec::Kind::PowerProfile;
    else
      throw std::invalid_argument("initial_data.kind must be 'gaussian' or 'power'");
    cfg.initial_data.amplitude = detail::get_or(i, "amplitude", 1e-2);
    cfg.initial_data.width = detail::get_or(i, "width", 1.0);
    cfg.initial_data.seed = detail::get_or<unsigned long long>(i, "seed", 2024ull);
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    cfg.solver.dt = detail::get_or(s, "dt", 0.0);
    cfg.solver.t_end = detail::get_or(s, "t_end", 1.0);
    const std::string scheme = detail::get_or<std::string>(s, "scheme", "IF-RK2");
    if (scheme == "IF-RK2")
      cfg.solver.scheme = Scheme::IFRK2;
    else if (scheme == "IF-RK4")
      cfg.solver.scheme = Scheme::IFRK4;
    else
      throw std::invalid_argument("solver.scheme must be 'IF-RK2' or 'IF-RK4'");
    cfg.solver.cfl_safety = detail::get_or(s, "cfl_safety", 0.4);
    if (s.contains("record")) {
      cfg.solver.record.t0 = detail::get_or(s.at("record"), "t0", 0.1);
      cfg.solver.record.q = detail::get_or(s.at("record"), "q", 1.25);
    }
  }
  cfg.solver.record_p = cfg.decay.p;
  if (j.contains("outputs")) cfg.output_dir = detail::get_or<std::string>(j.at("outputs"), "dir", "out");
  cfg.mode = detail::get_or<std::string>(j, "mode", "linear");
  cfg.radial = detail::get_or(j, "radial", false);
  cfg.threads = detail::get_or(j, "threads", 0);
  cfg.grid.validate();
  cfg.decay.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw std::runtime_error("load_checkpoint: missing sidecar " + path + ".json");
  nlohmann::json side = nlohmann::json::parse(js);
  GridSpec g;
  g.d = side.at("grid").at("d").get<int>();
  g.n = side.at("grid").at("n").get<int>();
  g.box_len = side.at("grid").at("box_len").get<double>();
  g.validate();
  DimensionlessParams dp;
  dp.beta = side.at("params").at("beta").get<double>();
  dp.gamma = side.at("params").at("gamma").get<double>();
  dp.mu_tilde = side.at("params").at("mu_tilde").get<double>();

  Checkpoint out{State(g, side.at("t").get<double>()), dp};
  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("load_checkpoint: cannot open " + path);
  auto slurp = [&](SpectralField& u) {
    for (cplx& c : u.coeffs) {
      double re = 0.0, im = 0.0;
      bin.read(reinterpret_cast<char*>(&re), sizeof re);
      bin.read(reinterpret_cast<char*>(&im), sizeof im);
      if (!bin) throw std::runtime_error("load_checkpoint: truncated payload in " + path);
      c = cplx(re, im);
    }
  };
  slurp(out.state.density);
  slurp(out.state.velocity);
  slurp(out.state.temperature);
  return out;
}

}  // namespace nsflab
