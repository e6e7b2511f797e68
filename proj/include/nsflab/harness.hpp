#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <map>
#include <string>
#include <vector>

#include "nsflab/config.hpp"
#include "nsflab/radial.hpp"

namespace nsflab {

// ---------------------------------------------------------------------------
// Initial data on the grid
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic per-mode phase, antisymmetric under k -> -k so the physical
// field is real. The canonical representative of {k, -k} fixes the sign.
inline double mode_phase(std::uint64_t seed, int k0, int k1, int k2) {
  int c[3] = {k0, k1, k2};
  double sign = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (c[i] == 0) continue;
    if (c[i] < 0) {
      sign = -1.0;
      c[0] = -c[0];
      c[1] = -c[1];
      c[2] = -c[2];
    }
    break;
  }
  std::uint64_t h = seed;
  for (int i = 0; i < 3; ++i) h = splitmix64(h ^ static_cast<std::uint64_t>(c[i] + (1 << 20)));
  const double u = static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
  return sign * (2.0 * kPi * u - kPi);
}

}  // namespace detail

// Mean-free initial data with prescribed low-frequency regularity.
//
// GaussianBump: spectral amplitude eps * exp(-|xi|^2 w^2 / 2) on every
// channel with fixed unit directions; realizes s1 = d/2 data (flat nonzero
// transform at the origin).
//
// PowerProfile: |U0|(xi) = eps |xi|^{s1 - d/2} between the grid floor and
// |xi| ~ 1, smoothly cut above by chi, random antisymmetric phases from the
// seed; every low block then carries a comparable share of the
// B^{-s1}_{2,inf} norm.
inline State make_initial_data(const InitialDataSpec& spec, const GridSpec& grid,
                               const DecayParams& dp) {
  spec.validate();
  dp.validate();
  grid.validate();
  State st(grid);
  const int d = grid.d;
  const double step = grid.mode_step();
  const std::size_t npts = grid.points();
  const double inv_sqrt_d = 1.0 / std::sqrt(double(d));

  if (spec.kind == InitialDataSpec::Kind::GaussianBump) {
    const double w2 = spec.width * spec.width;
    for_each_mode(grid, [&](std::size_t flat, int k0, int k1, int k2) {
      if (k0 == 0 && k1 == 0 && k2 == 0) return;
      const double r2 = step * step * (double(k0) * k0 + double(k1) * k1 + double(k2) * k2);
      const double amp = spec.amplitude * std::exp(-0.5 * r2 * w2);
      st.density.coeffs[flat] = cplx(amp, 0.0);
      st.temperature.coeffs[flat] = cplx(amp, 0.0);
      for (int c = 0; c < d; ++c) st.velocity.coeffs[c * npts + flat] = cplx(amp * inv_sqrt_d, 0.0);
    });
  } else {
    const double expo = dp.s1 - 0.5 * d;
    for_each_mode(grid, [&](std::size_t flat, int k0, int k1, int k2) {
      if (k0 == 0 && k1 == 0 && k2 == 0) return;
      const double r = step * std::sqrt(double(k0) * k0 + double(k1) * k1 + double(k2) * k2);
      const double amp = spec.amplitude * std::pow(r, expo) * CutoffProfile::chi(r);
      if (amp == 0.0) return;
      auto phased = [&](std::uint64_t salt) {
        const double ph = detail::mode_phase(spec.seed ^ salt, k0, k1, k2);
        return cplx(amp * std::cos(ph), amp * std::sin(ph));
      };
      st.density.coeffs[flat] = phased(0x61);
      st.temperature.coeffs[flat] = phased(0x74);
      for (int c = 0; c < d; ++c)
        st.velocity.coeffs[c * npts + flat] = inv_sqrt_d * phased(0x75 + 7ull * c);
    });
  }
  dealias(st);
  return st;
}

// Norms of the initial data that gate the decay theory: the low-frequency
// B^{-s1}_{2,inf} norm plus the high-frequency norms of (a, v, theta) and
// (grad a, v).
inline JsonValue data_report(const State& st, const DecayParams& dp) {
  st.require_consistent();
  const double d = st.grid().d, p = dp.p;
  const double inf = BesovParams::inf;
  JsonValue doc = JsonValue::object();
  doc["low_B_minus_s1_2inf"] =
      besov_norm(st.density, {-dp.s1, 2.0, inf}, BlockSide::Low, dp.j0) +
      besov_norm(st.velocity, {-dp.s1, 2.0, inf}, BlockSide::Low, dp.j0) +
      besov_norm(st.temperature, {-dp.s1, 2.0, inf}, BlockSide::Low, dp.j0);
  doc["high_density"] = besov_norm(st.density, {d / p, p, 1.0}, BlockSide::High, dp.j0);
  doc["high_velocity"] = besov_norm(st.velocity, {d / p - 1.0, p, 1.0}, BlockSide::High, dp.j0);
  doc["high_temperature"] =
      besov_norm(st.temperature, {d / p - 2.0, p, 1.0}, BlockSide::High, dp.j0);
  doc["high_grad_density_velocity"] =
      besov_norm(gradient(st.density), {d / p - 1.0, p, 1.0}, BlockSide::High, dp.j0) +
      besov_norm(st.velocity, {d / p - 1.0, p, 1.0}, BlockSide::High, dp.j0);
  return doc;
}

// ---------------------------------------------------------------------------
// Decay functionals
// ---------------------------------------------------------------------------

struct DpTable {
  std::map<double, double> low_by_s;  // s -> sup_t <t>^{(s1+s)/2} low norm
  double low_sup = 0.0;               // component 1 (max over the s grid)
  double argmax_s = 0.0;
  double high_density = 0.0;          // component 2
  double high_velocity = 0.0;         // component 3
  double high_temperature = 0.0;      // component 4
  double high_gradient = 0.0;         // component 5
  double total = 0.0;
};

namespace detail {
inline void require_components(const BlockNormRecord& rec,
                               const std::vector<std::pair<std::string, double>>& keys) {
  std::string missing;
  for (const auto& [comp, p] : keys)
    if (!rec.has(comp, p)) missing += (missing.empty() ? "" : ", ") + comp + "@p=" + fmt17(p);
  if (!missing.empty())
    throw std::invalid_argument("record is missing required norms: " + missing);
}

inline double japanese_bracket(double t) { return std::sqrt(1.0 + t * t); }
}  // namespace detail

// Time-weighted decay functional: low-frequency sup over the s grid plus the
// alpha-weighted high-frequency norms of (a, v, theta) and (grad v, theta).
inline DpTable compute_Dp(const BlockNormRecord& rec, const DecayParams& dp,
                          double t_max = std::numeric_limits<double>::infinity()) {
  dp.validate();
  const double d = dp.dim, p = dp.p, alpha = dp.alpha();
  detail::require_components(rec, {{"a", 2.0},
                                   {"upsilon", 2.0},
                                   {"theta", 2.0},
                                   {"a", p},
                                   {"upsilon", p},
                                   {"theta", p},
                                   {"grad_upsilon", p}});
  DpTable out;
  const auto& ts = rec.times();
  for (double s : dp.resolved_s_grid()) {
    double sup = 0.0;
    for (std::size_t it = 0; it < ts.size(); ++it) {
      if (ts[it] > t_max) break;
      double low = 0.0;
      for (int j = rec.j_min(); j <= std::min(dp.j0, rec.j_max()); ++j)
        low += std::pow(2.0, j * s) * (rec.value("a", 2.0, it, j) +
                                       rec.value("upsilon", 2.0, it, j) +
                                       rec.value("theta", 2.0, it, j));
      sup = std::max(sup, std::pow(detail::japanese_bracket(ts[it]), 0.5 * (dp.s1 + s)) * low);
    }
    out.low_by_s[s] = sup;
    if (sup >= out.low_sup) {
      out.low_sup = sup;
      out.argmax_s = s;
    }
  }
  auto wbracket = [alpha](double t) { return std::pow(detail::japanese_bracket(t), alpha); };
  auto wplain = [alpha](double t) { return std::pow(t, alpha); };
  out.high_density = tilde_sup_norm(rec, "a", d / p, p, wbracket, BlockSide::High, dp.j0, t_max);
  out.high_velocity =
      tilde_sup_norm(rec, "upsilon", d / p - 1.0, p, wbracket, BlockSide::High, dp.j0, t_max);
  out.high_temperature =
      tilde_sup_norm(rec, "theta", d / p - 2.0, p, wbracket, BlockSide::High, dp.j0, t_max);
  out.high_gradient =
      tilde_sup_norm(rec, "grad_upsilon", d / p, p, wplain, BlockSide::High, dp.j0, t_max) +
      tilde_sup_norm(rec, "theta", d / p, p, wplain, BlockSide::High, dp.j0, t_max);
  out.total = out.low_sup + out.high_density + out.high_velocity + out.high_temperature +
              out.high_gradient;
  return out;
}

struct XpTable {
  double low_sup = 0.0;      // (a,v,th) in L~inf B^{d/2-1}_{2,1}, low
  double low_l1 = 0.0;       // (a,v,th) in L1 B^{d/2+1}_{2,1}, low
  double high_density = 0.0; // a: L~inf + L1 at d/p
  double high_velocity = 0.0;
  double high_temperature = 0.0;
  double total = 0.0;
};

// Global-existence functional: hybrid sup/L1-in-time norms.
inline XpTable compute_Xp(const BlockNormRecord& rec, const DecayParams& dp,
                          double t_max = std::numeric_limits<double>::infinity()) {
  dp.validate();
  const double d = dp.dim, p = dp.p;
  detail::require_components(
      rec, {{"a", 2.0}, {"upsilon", 2.0}, {"theta", 2.0}, {"a", p}, {"upsilon", p}, {"theta", p}});
  XpTable out;
  auto unit = [](double) { return 1.0; };
  for (const char* comp : {"a", "upsilon", "theta"}) {
    out.low_sup += tilde_sup_norm(rec, comp, 0.5 * d - 1.0, 2.0, unit, BlockSide::Low, dp.j0, t_max);
    out.low_l1 += time_l1_norm(rec, comp, 0.5 * d + 1.0, 2.0, BlockSide::Low, dp.j0, t_max);
  }
  out.high_density = tilde_sup_norm(rec, "a", d / p, p, unit, BlockSide::High, dp.j0, t_max) +
                     time_l1_norm(rec, "a", d / p, p, BlockSide::High, dp.j0, t_max);
  out.high_velocity =
      tilde_sup_norm(rec, "upsilon", d / p - 1.0, p, unit, BlockSide::High, dp.j0, t_max) +
      time_l1_norm(rec, "upsilon", d / p + 1.0, p, BlockSide::High, dp.j0, t_max);
  out.high_temperature =
      tilde_sup_norm(rec, "theta", d / p - 2.0, p, unit, BlockSide::High, dp.j0, t_max) +
      time_l1_norm(rec, "theta", d / p, p, BlockSide::High, dp.j0, t_max);
  out.total = out.low_sup + out.low_l1 + out.high_density + out.high_velocity +
              out.high_temperature;
  return out;
}

// ---------------------------------------------------------------------------
// Named norm series
// ---------------------------------------------------------------------------

inline std::string fmt_index(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  std::string s(buf);
  std::string out;
  for (char c : s) {
    if (c == '-') out += 'm';
    else if (c == '.') out += 'p';
    else out += c;
  }
  return out;
}

struct NormSeries {
  std::string id;
  double theory_exponent = 0.0;  // 0 when no algebraic law applies
  bool algebraic = false;        // true: fit log-log; false: exponential side
  std::vector<double> values;
};

// Extracts the documented norm columns from a record: the low-frequency
// B^s_{2,1} norms of the triple for each s in the grid, and the
// high-frequency per-component norms at the configured p.
inline std::vector<NormSeries> norm_series(const BlockNormRecord& rec, const DecayParams& dp) {
  const auto& ts = rec.times();
  std::vector<NormSeries> out;
  auto low_series = [&](double s) {
    NormSeries ns;
    ns.id = "B" + fmt_index(s) + "_21_low";
    ns.theory_exponent = -0.5 * (dp.s1 + s);
    ns.algebraic = true;
    for (std::size_t it = 0; it < ts.size(); ++it) {
      double v = 0.0;
      for (int j = rec.j_min(); j <= std::min(dp.j0, rec.j_max()); ++j)
        v += std::pow(2.0, j * s) * (rec.value("a", 2.0, it, j) +
                                     rec.value("upsilon", 2.0, it, j) +
                                     rec.value("theta", 2.0, it, j));
      ns.values.push_back(v);
    }
    out.push_back(std::move(ns));
  };
  for (double s : dp.resolved_s_grid()) low_series(s);

  const double d = dp.dim, p = dp.p;
  struct HighSpec {
    const char* comp;
    double s;
  };
  const std::string ptag = fmt_index(p) + "1";
  for (const HighSpec& h : {HighSpec{"a", d / p}, HighSpec{"upsilon", d / p - 1.0},
                            HighSpec{"theta", d / p - 2.0}, HighSpec{"grad_upsilon", d / p},
                            HighSpec{"weff", d / p - 1.0}}) {
    if (!rec.has(h.comp, p)) continue;
    NormSeries ns;
    ns.id = "B" + fmt_index(h.s) + "_" + ptag + "_high_" + h.comp;
    ns.algebraic = false;
    for (std::size_t it = 0; it < ts.size(); ++it) {
      double v = 0.0;
      for (int j = std::max(rec.j_min(), dp.j0 - 1); j <= rec.j_max(); ++j)
        v += std::pow(2.0, j * h.s) * rec.value(h.comp, p, it, j);
      ns.values.push_back(v);
    }
    out.push_back(std::move(ns));
  }
  return out;
}

// Least-squares exponential rate: log(value) against t (positive values only).
inline double fit_exponential_rate(const std::vector<double>& t, const std::vector<double>& v,
                                   double t_lo, double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi || !(v[i] > 0.0)) continue;
    sx += t[i];
    sy += std::log(v[i]);
    sxx += t[i] * t[i];
    sxy += t[i] * std::log(v[i]);
    ++n;
  }
  if (n < 3) return 0.0;
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Report writing
// ---------------------------------------------------------------------------

namespace detail {

inline void write_norms_csv(const std::string& path, const std::vector<double>& ts,
                            const std::vector<NormSeries>& series) {
  std::ofstream os(path);
  os << "t";
  for (const auto& ns : series) os << ',' << ns.id;
  os << '\n';
  for (std::size_t it = 0; it < ts.size(); ++it) {
    os << fmt17(ts[it]);
    for (const auto& ns : series) os << ',' << fmt17(ns.values[it]);
    os << '\n';
  }
}

// log-log plot with a reference slope segment
inline void write_svg_plot(const std::string& path, const std::vector<double>& ts,
                           const std::vector<NormSeries>& series, double window_lo,
                           double window_hi) {
  const int W = 720, H = 480, M = 56;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& ns : series)
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i] <= 0.0 || !(ns.values[i] > 0.0)) continue;
      xlo = std::min(xlo, ts[i]);
      xhi = std::max(xhi, ts[i]);
      ylo = std::min(ylo, ns.values[i]);
      yhi = std::max(yhi, ns.values[i]);
    }
  if (!(xlo < xhi) || !(ylo < yhi)) return;
  auto px = [&](double t) { return M + (std::log(t) - std::log(xlo)) /
                                       (std::log(xhi) - std::log(xlo)) * (W - 2 * M); };
  auto py = [&](double v) { return H - M - (std::log(v) - std::log(ylo)) /
                                           (std::log(yhi) - std::log(ylo)) * (H - 2 * M); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ofstream os(path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='" << H - 12
     << "' text-anchor='middle' font-size='12'>t (log)</text>\n";
  int ci = 0;
  int label_y = 18;
  for (const auto& ns : series) {
    const char* color = palette[ci++ % 8];
    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i] <= 0.0 || !(ns.values[i] > 0.0)) continue;
      os << px(ts[i]) << ',' << py(ns.values[i]) << ' ';
    }
    os << "'/>\n";
    os << "<text x='" << W - M + 4 << "' y='" << label_y << "' font-size='10' fill='" << color
       << "'>" << ns.id << "</text>\n";
    label_y += 14;
    if (ns.algebraic && window_lo > xlo && window_hi > window_lo) {
      // overlay the theory slope through the first in-window sample
      double t0 = 0.0, v0 = 0.0;
      for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] >= window_lo && ns.values[i] > 0.0) {
          t0 = ts[i];
          v0 = ns.values[i];
          break;
        }
      if (t0 > 0.0) {
        const double t1 = std::min(window_hi, xhi);
        const double v1 = v0 * std::pow(t1 / t0, ns.theory_exponent);
        os << "<line x1='" << px(t0) << "' y1='" << py(v0) << "' x2='" << px(t1) << "' y2='"
           << py(v1) << "' stroke='" << color << "' stroke-dasharray='4,3' stroke-width='1'/>\n";
      }
    }
  }
  os << "</svg>\n";
}

}  // namespace detail

struct ExperimentOutcome {
  BlockNormRecord record;
  std::vector<NormSeries> series;
  JsonValue fits = JsonValue::array();
  JsonValue functionals = JsonValue::object();
  JsonValue summary = JsonValue::object();
  std::optional<BlockNormRecord> linear_record;  // mode = "both"
  std::optional<State> final_state;              // grid runs
  DimensionlessParams params;
};

// Runs the configured study and writes blocks.csv, norms.csv, fits.json and
// functionals.json (plus plots/*.svg on request) into the output directory.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, bool write_files = true,
                                 bool plots = false);

namespace detail {

inline JsonValue dp_json(const DpTable& t) {
  JsonValue v = JsonValue::object();
  JsonValue lows = JsonValue::object();
  for (const auto& [s, val] : t.low_by_s) lows[fmt_index(s)] = val;
  v["low_sup_by_s"] = lows;
  v["low_sup"] = t.low_sup;
  v["argmax_s"] = t.argmax_s;
  v["high_density"] = t.high_density;
  v["high_velocity"] = t.high_velocity;
  v["high_temperature"] = t.high_temperature;
  v["high_gradient"] = t.high_gradient;
  v["total"] = t.total;
  return v;
}

inline JsonValue xp_json(const XpTable& t) {
  JsonValue v = JsonValue::object();
  v["low_sup"] = t.low_sup;
  v["low_l1"] = t.low_l1;
  v["high_density"] = t.high_density;
  v["high_velocity"] = t.high_velocity;
  v["high_temperature"] = t.high_temperature;
  v["total"] = t.total;
  return v;
}

}  // namespace detail

inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg, bool write_files, bool plots) {
  namespace fs = std::filesystem;
  ExperimentOutcome out;
  const DecayParams& dp = cfg.decay;
  dp.validate();

  // box-saturation estimate: the frequency floor caps algebraic decay
  const double floor_xi = cfg.grid.mode_step();
  const double t_saturation = 0.5 / (floor_xi * floor_xi);

  NondimensionalModel model = nondimensionalize(cfg.physics, cfg.pressure);
  out.params = model.params;
  std::vector<double> times = cfg.solver.record.times(cfg.solver.t_end);

  if (cfg.radial) {
    if (cfg.grid.d != 3)
      throw std::invalid_argument("run_experiment: the radial mode is specific to d = 3");
    RadialModel radial(model.params, -20, 4);
    RadialModel::Profile prof =
        cfg.initial_data.kind == InitialDataSpec::Kind::GaussianBump
            ? radial.gaussian_profile(cfg.initial_data.amplitude, cfg.initial_data.width)
            : radial.power_profile(cfg.initial_data.amplitude, dp.s1);
    out.record = radial.record(prof, times);
    out.summary["data_low_norm"] = radial.data_low_norm(prof, dp.s1, dp.j0);
  } else {
    State init = make_initial_data(cfg.initial_data, cfg.grid, dp);
    out.summary["data_norms"] = data_report(init, dp);
    auto linear_record = [&]() {
      const BlockRange jr = block_range(cfg.grid);
      std::vector<double> ps{2.0};
      if (dp.p != 2.0) ps.push_back(dp.p);
      BlockNormRecord rec(jr.j_min, jr.j_max,
                          {"a", "upsilon", "theta", "grad_a", "grad_upsilon", "weff"}, ps);
      for (double t : times) {
        State st = apply_semigroup(init, t, model.params);
        detail::record_state(rec, st, t, dp.p);
      }
      return rec;
    };
    if (cfg.mode == "linear") {
      out.record = linear_record();
    } else {
      SolverConfig scfg = cfg.solver;
      scfg.record_p = dp.p;
      IntegrationResult res = integrate(init, scfg, model.params, model.table);
      out.record = std::move(res.record);
      out.final_state = std::move(res.final_state);
      out.summary["dt_used"] = res.dt_used;
      out.summary["steps"] = static_cast<long long>(res.steps);
      out.summary["upper_spectrum_fraction"] = res.upper_spectrum_fraction;
      if (cfg.mode == "both") out.linear_record = linear_record();
    }
  }

  out.series = norm_series(out.record, dp);
  const auto& ts = out.record.times();

  // fit window: inside the recorded range, before box saturation (grid runs)
  double wlo = std::max(2.0 * cfg.solver.record.t0, 1.0);
  double whi = cfg.radial ? cfg.solver.t_end : std::min(cfg.solver.t_end, t_saturation);
  for (const auto& ns : out.series) {
    JsonValue f = JsonValue::object();
    f["norm_id"] = ns.id;
    if (ns.algebraic) {
      f["theory_exponent"] = ns.theory_exponent;
      try {
        DecayFit fit = fit_decay(ts, ns.values, wlo, whi);
        f["window"] = JsonValue::array();
        f["window"].push_back(fit.window_lo);
        f["window"].push_back(fit.window_hi);
        f["exponent"] = fit.exponent;
        f["r2"] = fit.r2;
        f["samples"] = fit.samples;
      } catch (const std::exception& e) {
        f["error"] = std::string(e.what());
      }
      f["saturation_flagged"] = !cfg.radial && cfg.solver.t_end > t_saturation;
    } else {
      f["exp_rate"] = fit_exponential_rate(ts, ns.values, wlo, whi);
    }
    out.fits.push_back(std::move(f));
  }

  // functionals need the configured p and the gradient component
  try {
    out.functionals["Dp"] = detail::dp_json(compute_Dp(out.record, dp));
    out.functionals["Xp"] = detail::xp_json(compute_Xp(out.record, dp));
  } catch (const std::exception& e) {
    out.functionals["error"] = std::string(e.what());
  }
  out.functionals["alpha"] = dp.alpha();
  out.functionals["s1"] = dp.s1;
  out.functionals["p"] = dp.p;
  out.functionals["j0"] = dp.j0;
  JsonValue jrange = JsonValue::array();
  jrange.push_back(out.record.j_min());
  jrange.push_back(out.record.j_max());
  out.functionals["j_range"] = std::move(jrange);

  out.summary["t_saturation"] = t_saturation;
  out.summary["version"] = kVersion;
  out.summary["config"] = to_report_json(cfg.raw);

  if (write_files) {
    fs::create_directories(cfg.output_dir);
    {
      std::ofstream os(fs::path(cfg.output_dir) / "blocks.csv");
      out.record.write_csv(os, fmt17);
    }
    detail::write_norms_csv((fs::path(cfg.output_dir) / "norms.csv").string(), ts, out.series);
    JsonValue fits_doc = JsonValue::object();
    fits_doc["version"] = kVersion;
    fits_doc["config"] = to_report_json(cfg.raw);
    fits_doc["fits"] = out.fits;
    {
      std::ofstream os(fs::path(cfg.output_dir) / "fits.json");
      os << fits_doc.dump() << '\n';
    }
    JsonValue func_doc = out.functionals;
    func_doc["version"] = kVersion;
    func_doc["config"] = to_report_json(cfg.raw);
    {
      std::ofstream os(fs::path(cfg.output_dir) / "functionals.json");
      os << func_doc.dump() << '\n';
    }
    {
      std::ofstream os(fs::path(cfg.output_dir) / "summary.json");
      os << out.summary.dump() << '\n';
    }
    if (out.linear_record) {
      std::ofstream os(fs::path(cfg.output_dir) / "blocks_linear.csv");
      out.linear_record->write_csv(os, fmt17);
      detail::write_norms_csv((fs::path(cfg.output_dir) / "norms_linear.csv").string(),
                              out.linear_record->times(), norm_series(*out.linear_record, dp));
    }
    if (out.final_state)
      save_checkpoint(*out.final_state, out.params,
                      (fs::path(cfg.output_dir) / "state.bin").string());
    if (plots) {
      fs::create_directories(fs::path(cfg.output_dir) / "plots");
      detail::write_svg_plot((fs::path(cfg.output_dir) / "plots" / "norms.svg").string(), ts,
                             out.series, wlo, whi);
    }
  }
  return out;
}

}  // namespace nsflab
