// Command-line front end: config parsing, subcommand dispatch, deterministic
// report generation. One process per invocation; all I/O through files.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nsflab/propcheck.hpp"

namespace fs = std::filesystem;
using namespace nsflab;

namespace {

void emit(const JsonValue& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump() << '\n';
  } else {
    std::ofstream os(out_path);
    os << doc.dump() << '\n';
  }
}

JsonValue with_version(JsonValue doc) {
  doc["version"] = kVersion;
  return doc;
}

int cmd_symbol(double rho, double beta, double gamma, double mu_tilde, double t,
               const std::string& out_path) {
  const DimensionlessParams dp{beta, gamma, mu_tilde};
  dp.validate();
  const Eigen::Matrix3d L = symbol_matrix(rho, dp);
  JsonValue doc = JsonValue::object();
  doc["rho"] = rho;
  doc["beta"] = beta;
  doc["gamma"] = gamma;
  doc["mu_tilde"] = mu_tilde;
  JsonValue rows = JsonValue::array();
  for (int i = 0; i < 3; ++i) {
    JsonValue row = JsonValue::array();
    for (int j = 0; j < 3; ++j) row.push_back(L(i, j));
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  Eigen::EigenSolver<Eigen::Matrix3d> es(L);
  JsonValue eigs = JsonValue::array();
  for (int i = 0; i < 3; ++i) {
    JsonValue e = JsonValue::object();
    e["re"] = es.eigenvalues()[i].real();
    e["im"] = es.eigenvalues()[i].imag();
    eigs.push_back(std::move(e));
  }
  doc["eigenvalues"] = std::move(eigs);
  doc["spectral_abscissa"] = spectral_abscissa(rho, dp);
  if (t >= 0.0) {
    const ModeSemigroup sg = mode_semigroup(rho, t, dp);
    JsonValue m = JsonValue::array();
    for (int i = 0; i < 3; ++i) {
      JsonValue row = JsonValue::array();
      for (int j = 0; j < 3; ++j) row.push_back(sg.longitudinal(i, j));
      m.push_back(std::move(row));
    }
    doc["semigroup_t"] = t;
    doc["semigroup"] = std::move(m);
    doc["transverse_factor"] = sg.transverse;
  }
  emit(with_version(std::move(doc)), out_path);
  return 0;
}

int cmd_lyapunov(double beta, double gamma, double mu_tilde, double rho0,
                 const std::string& out_path) {
  const DimensionlessParams dp{beta, gamma, mu_tilde};
  dp.validate();
  const LyapunovData ly = constructive_rate(dp, rho0);
  JsonValue doc = JsonValue::object();
  doc["beta"] = beta;
  doc["gamma"] = gamma;
  doc["beta_tilde"] = ly.beta_tilde;
  doc["K"] = ly.K;
  doc["C0"] = ly.C0;
  doc["c0"] = ly.c0;
  doc["rho0"] = ly.rho0;
  doc["minimizing_rho"] = ly.minimizing_rho;
  doc["K_used"] = ly.K_used;
  doc["c0_exact_form"] = ly.c0_exact;
  doc["c0_young_chain"] = ly.c0_young;
  emit(with_version(std::move(doc)), out_path);
  return 0;
}

int cmd_linear_decay(const std::string& config_path, bool plots) {
  ExperimentConfig cfg = load_config(config_path);
  cfg.mode = "linear";
  if (!cfg.radial && cfg.grid.d == 3) cfg.radial = true;  // grid-free by default here
  ExperimentOutcome out = run_experiment(cfg, true, plots);

  // block-wise operator-norm envelopes against the certified rate
  NondimensionalModel model = nondimensionalize(cfg.physics, cfg.pressure);
  const LyapunovData ly = constructive_rate(model.params);
  JsonValue envs = JsonValue::array();
  for (int j = -4; j <= 0; ++j) {
    std::vector<double> tg;
    const double rin = 0.75 * std::ldexp(1.0, j);
    for (int i = 1; i <= 16; ++i) tg.push_back(i * 0.5 / (rin * rin));
    const BlockEnvelope env = block_decay_envelope(j, model.params, tg, cfg.decay.j0);
    JsonValue e = JsonValue::object();
    e["j"] = j;
    e["fitted_rate"] = env.fitted_rate;
    e["rate_per_block"] = env.rate_per_block;
    e["certified"] = env.certified;
    envs.push_back(std::move(e));
  }
  JsonValue doc = JsonValue::object();
  doc["c0"] = ly.c0;
  doc["envelopes"] = std::move(envs);
  std::ofstream os(fs::path(cfg.output_dir) / "envelopes.json");
  os << with_version(std::move(doc)).dump() << '\n';
  std::cout << "linear-decay study written to " << cfg.output_dir << '\n';
  return 0;
}

int cmd_simulate(const std::string& config_path, bool plots) {
  ExperimentConfig cfg = load_config(config_path);
  if (cfg.radial)
    throw std::invalid_argument(
        "simulate needs a grid config (radial = false); use linear-decay for radial studies");
  if (cfg.mode == "linear") cfg.mode = "nonlinear";
  ExperimentOutcome out = run_experiment(cfg, true, plots);
  std::cout << "simulation written to " << cfg.output_dir << '\n';
  return 0;
}

int cmd_norms(const std::string& ckpt, double s, double p, double r, const std::string& range,
              int j0, const std::string& out_path) {
  Checkpoint c = load_checkpoint(ckpt);
  BlockSide side = BlockSide::Full;
  if (range == "low") side = BlockSide::Low;
  else if (range == "high") side = BlockSide::High;
  else if (range != "full") throw std::invalid_argument("--range must be full, low or high");
  const BesovParams bp{s, p, std::isinf(r) ? BesovParams::inf : r};
  JsonValue doc = JsonValue::object();
  doc["checkpoint"] = ckpt;
  doc["t"] = c.state.time;
  doc["s"] = s;
  doc["p"] = p;
  doc["r"] = r;
  doc["range"] = range;
  doc["j0"] = j0;
  const BlockRange jr = block_range(c.state.grid());
  JsonValue jrange = JsonValue::array();
  jrange.push_back(jr.j_min);
  jrange.push_back(jr.j_max);
  doc["j_range"] = std::move(jrange);
  doc["density"] = besov_norm(c.state.density, bp, side, j0);
  doc["velocity"] = besov_norm(c.state.velocity, bp, side, j0);
  doc["temperature"] = besov_norm(c.state.temperature, bp, side, j0);
  emit(with_version(std::move(doc)), out_path);
  return 0;
}

int cmd_fit(const std::string& csv, const std::string& col, const std::string& window,
            const std::string& out_path) {
  const auto colon = window.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--window wants the form LO:HI, e.g. 10:1000");
  const double wlo = std::stod(window.substr(0, colon));
  const double whi = std::stod(window.substr(colon + 1));

  std::ifstream in(csv);
  if (!in) throw std::runtime_error("cannot open CSV " + csv);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> names;
  {
    std::istringstream hs(header);
    std::string tok;
    while (std::getline(hs, tok, ',')) names.push_back(tok);
  }
  int tcol = -1, vcol = -1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == "t") tcol = static_cast<int>(i);
    if (names[i] == col) vcol = static_cast<int>(i);
  }
  if (tcol < 0) throw std::runtime_error(csv + ": no 't' column");
  if (vcol < 0) throw std::runtime_error(csv + ": no column named '" + col + "'");
  std::vector<double> ts, vs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    int idx = 0;
    double tv = 0.0, vv = 0.0;
    while (std::getline(ls, tok, ',')) {
      if (idx == tcol) tv = std::stod(tok);
      if (idx == vcol) vv = std::stod(tok);
      ++idx;
    }
    ts.push_back(tv);
    vs.push_back(vv);
  }
  const DecayFit fit = fit_decay(ts, vs, wlo, whi);
  JsonValue doc = JsonValue::object();
  doc["csv"] = csv;
  doc["norm_id"] = col;
  JsonValue w = JsonValue::array();
  w.push_back(fit.window_lo);
  w.push_back(fit.window_hi);
  doc["window"] = std::move(w);
  doc["exponent"] = fit.exponent;
  doc["intercept"] = fit.intercept;
  doc["r2"] = fit.r2;
  doc["samples"] = fit.samples;
  emit(with_version(std::move(doc)), out_path);
  return 0;
}

int cmd_propcheck(const std::string& suite, unsigned seed) {
  const auto results = run_propcheck(suite, seed);
  if (results.empty()) {
    std::cerr << "propcheck: unknown suite '" << suite << "'\n";
    return 2;
  }
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s  %-12s %-38s metric=%.3e  bound=%.3e\n", r.pass ? "PASS" : "FAIL",
                r.suite.c_str(), r.name.c_str(), r.metric, r.threshold);
    all = all && r.pass;
  }
  if (!all) {
    for (const auto& r : results)
      if (!r.pass) std::cerr << "violated invariant: " << r.suite << "/" << r.name << '\n';
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral decay laboratory for the dimensionless compressible "
               "Navier-Stokes-Fourier system"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads for data-parallel loops (0 = all cores)");

  // symbol
  auto* sym = app.add_subcommand("symbol", "mode matrix, eigenvalues and semigroup at |xi| = rho");
  double rho = 1.0, beta = 1.0, gamma = 1.0, mu_tilde = 0.5, tsym = -1.0, rho0 = 1.0;
  std::string out_path;
  sym->add_option("--rho", rho, "frequency magnitude")->check(CLI::NonNegativeNumber);
  sym->add_option("--beta", beta, "dimensionless heat diffusivity");
  sym->add_option("--gamma", gamma, "dimensionless coupling");
  sym->add_option("--mu-tilde", mu_tilde, "shear fraction mu/nu");
  sym->add_option("--t", tsym, "also report exp(t L) at this time");
  sym->add_option("--out", out_path, "write JSON here instead of stdout");

  // lyapunov
  auto* lya = app.add_subcommand("lyapunov", "Lyapunov constants and the constructive decay rate");
  lya->add_option("--beta", beta, "dimensionless heat diffusivity");
  lya->add_option("--gamma", gamma, "dimensionless coupling");
  lya->add_option("--mu-tilde", mu_tilde, "shear fraction mu/nu");
  lya->add_option("--rho0", rho0, "frequency cap of the scan")->check(CLI::PositiveNumber);
  lya->add_option("--out", out_path, "write JSON here instead of stdout");

  // linear-decay
  auto* lin = app.add_subcommand("linear-decay",
                                 "semigroup decay-rate study plus block decay envelopes");
  std::string config_path;
  bool plots = false;
  lin->add_option("--config", config_path, "experiment config (JSON)")->required();
  lin->add_flag("--plots", plots, "emit log-log SVG plots");

  // simulate
  auto* simu = app.add_subcommand("simulate", "full nonlinear run with block-norm recording");
  simu->add_option("--config", config_path, "experiment config (JSON)")->required();
  simu->add_flag("--plots", plots, "emit log-log SVG plots");

  // norms
  auto* nrm = app.add_subcommand("norms", "Besov norms of a checkpoint");
  std::string ckpt, range = "full";
  double s = 0.0, p = 2.0, rsum = 1.0;
  int j0 = 0;
  nrm->add_option("--checkpoint", ckpt, "checkpoint payload path")->required();
  nrm->add_option("--s", s, "regularity exponent");
  nrm->add_option("--p", p, "Lebesgue exponent");
  nrm->add_option("--r", rsum, "summation exponent (inf allowed)");
  nrm->add_option("--range", range, "full | low | high");
  nrm->add_option("--j0", j0, "low/high threshold");
  nrm->add_option("--out", out_path, "write JSON here instead of stdout");

  // fit
  auto* fit = app.add_subcommand("fit", "power-law fit of a norm column from a CSV");
  std::string csv, col, window = "1:100";
  fit->add_option("--csv", csv, "wide CSV with a t column")->required();
  fit->add_option("--col", col, "column to fit")->required();
  fit->add_option("--window", window, "fit window LO:HI");
  fit->add_option("--out", out_path, "write JSON here instead of stdout");

  // propcheck
  auto* prop = app.add_subcommand("propcheck", "run the invariant suite");
  std::string suite = "all";
  unsigned seed = 2024;
  prop->add_option("--suite", suite, "spectral | besov | linear | solver | nsf | all");
  prop->add_option("--seed", seed, "seed for randomized checks");

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (sym->parsed()) return cmd_symbol(rho, beta, gamma, mu_tilde, tsym, out_path);
    if (lya->parsed()) return cmd_lyapunov(beta, gamma, mu_tilde, rho0, out_path);
    if (lin->parsed()) return cmd_linear_decay(config_path, plots);
    if (simu->parsed()) return cmd_simulate(config_path, plots);
    if (nrm->parsed()) return cmd_norms(ckpt, s, p, rsum, range, j0, out_path);
    if (fit->parsed()) return cmd_fit(csv, col, window, out_path);
    if (prop->parsed()) return cmd_propcheck(suite, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
