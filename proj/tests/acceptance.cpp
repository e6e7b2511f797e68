// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cstdio>
#include <vector>

#include "nsflab/propcheck.hpp"

using namespace nsflab;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int idx, const char* name, bool pass, const std::string& detail, double secs) {
  std::printf("%s  criterion %d: %-34s %s  [%.1f s]\n", pass ? "PASS" : "FAIL", idx, name,
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* spec, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, spec, a, b, c);
  return buf;
}

const DimensionlessParams kUnitParams{1.0, 1.0, 0.5};  // perfect gas, R=cv=1, kappa=nu

std::vector<double> geometric_times(double t0, double q, double t_end) {
  std::vector<double> out{0.0};
  for (double t = t0; t <= t_end; t *= q) out.push_back(t);
  return out;
}

double low_besov_series_at(const BlockNormRecord& rec, std::size_t it, double s, int j0) {
  double v = 0.0;
  for (int j = rec.j_min(); j <= std::min(j0, rec.j_max()); ++j)
    v += std::pow(2.0, j * s) * (rec.value("a", 2.0, it, j) + rec.value("upsilon", 2.0, it, j) +
                                 rec.value("theta", 2.0, it, j));
  return v;
}

// --- criterion 1: Matsumura-Nishida rate on the grid-free radial model -----
void criterion_1() {
  Timer tm;
  RadialModel radial(kUnitParams, -20, 4, 48);
  auto prof = radial.gaussian_profile(1e-2, 1.0);
  const auto times = geometric_times(0.1, 1.25, 1100.0);
  BlockNormRecord rec = radial.record(prof, times);
  std::vector<double> series;
  for (std::size_t it = 0; it < rec.times().size(); ++it)
    series.push_back(low_besov_series_at(rec, it, 0.0, 0));
  const DecayFit fit = fit_decay(rec.times(), series, 10.0, 1000.0);
  const bool pass = std::abs(fit.exponent + 0.750) <= 0.05 && tm.seconds() < 10.0;
  report(1, "Matsumura-Nishida linear rate", pass,
         fmt("exponent=%.4f (want -0.750 +- 0.05), r2=%.5f", fit.exponent, fit.r2), tm.seconds());
}

// --- criterion 2: general rate law (s1, s) grid --------------------------
void criterion_2() {
  Timer tm;
  RadialModel radial(kUnitParams, -20, 4, 48);
  const auto times = geometric_times(0.1, 1.25, 1100.0);
  const double s1 = 1.5;  // d/2 and s0(p=2) coincide in d = 3
  bool pass = true;
  std::string detail;
  for (int kind = 0; kind < 2; ++kind) {
    auto prof = kind == 0 ? radial.gaussian_profile(1e-2, 1.0) : radial.power_profile(1e-2, s1);
    BlockNormRecord rec = radial.record(prof, times);
    for (double s : {0.0, 1.0, 1.5, 2.5}) {
      std::vector<double> series;
      for (std::size_t it = 0; it < rec.times().size(); ++it)
        series.push_back(low_besov_series_at(rec, it, s, 0));
      const DecayFit fit = fit_decay(rec.times(), series, 10.0, 1000.0);
      const double want = -0.5 * (s1 + s);
      if (std::abs(fit.exponent - want) > 0.07) {
        pass = false;
        detail += std::string(kind == 0 ? " [gauss" : " [power") +
                  fmt(" s=%.1f: %.3f vs %.3f]", s, fit.exponent, want);
      }
    }
  }
  if (pass) detail = "8 fits within +-0.07 of -(s1+s)/2";
  pass = pass && tm.seconds() < 60.0;
  report(2, "general rate law (R-E49 analogue)", pass, detail, tm.seconds());
}

// --- criterion 3: Lyapunov decay certificate ------------------------------
void criterion_3() {
  Timer tm;
  int violations = 0;
  bool positive = true;
  double worst_margin = -1e300;
  for (double beta : {0.5, 1.0, 2.0})
    for (double gamma : {0.5, 1.0, 2.0}) {
      const DimensionlessParams dp{beta, gamma, 0.5};
      const LyapunovData ly = constructive_rate(dp, 1.0);
      positive = positive && ly.c0 > 0.0;
      for (int i = 0; i < 64; ++i) {
        const double rho = 0.01 * std::pow(100.0, double(i) / 63.0);
        const double cond = lyapunov_condition(rho, ly.K_used);
        for (int k = 0; k < 20; ++k) {
          const double tmax = 50.0 / (rho * rho);
          const double t = 1e-2 * std::pow(tmax / 1e-2, double(k) / 19.0);
          const double nrm =
              operator_two_norm(matrix_exponential(t * symbol_matrix(rho, dp)));
          const double bound = std::sqrt(cond) * std::exp(-0.5 * ly.c0 * rho * rho * t);
          worst_margin = std::max(worst_margin, nrm - bound);
          if (nrm - bound > 1e-9) ++violations;
        }
      }
    }
  const bool pass = positive && violations == 0 && tm.seconds() < 5.0;
  report(3, "Lemma 4.1 decay certificate", pass,
         fmt("violations=%.0f/11520, worst margin=%.2e", double(violations), worst_margin),
         tm.seconds());
}

// --- criterion 4: block decay envelopes ----------------------------------
void criterion_4() {
  Timer tm;
  const LyapunovData ly = constructive_rate(kUnitParams, 1.0);
  bool pass = ly.c0 > 0.0;
  double worst_ratio = 1e300;
  for (int j = -4; j <= 0; ++j) {
    std::vector<double> tg;
    const double rin = 0.75 * std::ldexp(1.0, j);
    for (int i = 1; i <= 16; ++i) tg.push_back(i * 0.5 / (rin * rin));
    const BlockEnvelope env = block_decay_envelope(j, kUnitParams, tg, 0);
    const double c_fit = env.rate_per_block;  // envelope rate / 2^{2j}
    worst_ratio = std::min(worst_ratio, c_fit / (0.5 * ly.c0));
    if (!(c_fit >= 0.5 * ly.c0 / 4.0)) pass = false;
  }
  pass = pass && tm.seconds() < 10.0;
  report(4, "block decay envelopes (R-E33 analogue)", pass,
         fmt("worst c_fit/(c0/2)=%.3f (need >= 0.25)", worst_ratio), tm.seconds());
}

// --- criterion 5: desk-scale nonlinear run --------------------------------
void criterion_5() {
  Timer tm;
  const GridSpec grid{3, 64, 64.0};
  const PhysicalParams phys{0.0, 0.5, 1.0, 1.0, 1.0, 1.0};  // nu = 1 = kappa
  NondimensionalModel model = nondimensionalize(phys, PressureLaw::perfect_gas(1.0));
  const DecayParams decay{3, 1.5, 2.0, 0.01, 0};
  InitialDataSpec spec;
  spec.kind = InitialDataSpec::Kind::GaussianBump;
  spec.amplitude = 1e-2;
  spec.width = 2.0;
  State init = make_initial_data(spec, grid, decay);

  SolverConfig cfg;
  cfg.t_end = 80.0;  // covers both the t_end = 60 table and the 80 extension
  cfg.scheme = Scheme::IFRK2;
  IntegrationResult res = integrate(init, cfg, model.params, model.table);

  std::vector<double> series;
  for (std::size_t it = 0; it < res.record.times().size(); ++it)
    series.push_back(low_besov_series_at(res.record, it, 0.0, decay.j0));
  const DecayFit fit = fit_decay(res.record.times(), series, 5.0, 40.0);
  bool pass = std::abs(fit.exponent + 0.75) <= 0.2;

  const DpTable d60 = compute_Dp(res.record, decay, 60.0);
  const DpTable d80 = compute_Dp(res.record, decay, 80.0);
  const double comps60[5] = {d60.low_sup, d60.high_density, d60.high_velocity,
                             d60.high_temperature, d60.high_gradient};
  const double comps80[5] = {d80.low_sup, d80.high_density, d80.high_velocity,
                             d80.high_temperature, d80.high_gradient};
  double worst_drift = 0.0;
  for (int i = 0; i < 5; ++i) {
    if (!(std::isfinite(comps60[i]) && comps60[i] > 0.0)) pass = false;
    worst_drift = std::max(worst_drift, std::abs(comps80[i] - comps60[i]) /
                                            std::max(comps60[i], 1e-300));
  }
  if (worst_drift >= 0.05) pass = false;
  pass = pass && tm.seconds() < 1800.0;
  report(5, "desk-scale nonlinear run", pass,
         fmt("exponent=%.3f (want -0.75 +- 0.2), Dp drift 60->80 = %.2f%%", fit.exponent,
             100.0 * worst_drift),
         tm.seconds());
}

// --- criterion 6: perturbation order --------------------------------------
void criterion_6() {
  Timer tm;
  const GridSpec grid{3, 32, 2.0 * kPi};
  const PhysicalParams phys{0.0, 0.5, 1.0, 1.0, 1.0, 1.0};
  NondimensionalModel model = nondimensionalize(phys, PressureLaw::perfect_gas(1.0));
  const DecayParams decay{3, 1.5, 2.0, 0.01, 0};
  auto diff_norm = [&](double amp) {
    InitialDataSpec spec;
    spec.amplitude = amp;
    spec.width = 1.0;
    State init = make_initial_data(spec, grid, decay);
    SolverConfig cfg;
    cfg.t_end = 1.0;
    IntegrationResult nl = integrate(init, cfg, model.params, model.table);
    State lin = apply_semigroup(init, 1.0, model.params);
    State d = nl.final_state;
    d -= lin;
    return besov_norm(d.density, {0.0, 2.0, 1.0}) + besov_norm(d.velocity, {0.0, 2.0, 1.0}) +
           besov_norm(d.temperature, {0.0, 2.0, 1.0});
  };
  const double ratio = diff_norm(1e-3) / diff_norm(5e-4);
  const bool pass = ratio >= 3.4 && ratio <= 4.6 && tm.seconds() < 300.0;
  report(6, "quadratic perturbation order", pass, fmt("ratio=%.3f (want [3.4, 4.6])", ratio),
         tm.seconds());
}

// --- criterion 7: property suites ------------------------------------------
void criterion_7() {
  Timer tm;
  const auto results = run_propcheck("all");
  int failed = 0;
  std::string names;
  for (const auto& r : results)
    if (!r.pass) {
      ++failed;
      names += " " + r.name;
    }
  const bool pass = failed == 0 && tm.seconds() < 60.0;
  report(7, "property suites (propcheck)", pass,
         failed == 0 ? fmt("%.0f checks green", double(results.size()))
                     : "failing:" + names,
         tm.seconds());
}

// --- criterion 8: nondimensionalization identities -------------------------
void criterion_8() {
  Timer tm;
  bool pass = true;
  std::string detail;
  // R = cv gives gamma = 1 exactly at the unit reference state
  {
    const PhysicalParams phys{0.0, 0.5, 1.0, 1.0, 1.0, 1.0};
    auto model = nondimensionalize(phys, PressureLaw::perfect_gas(1.0));
    if (model.params.gamma != 1.0) {
      pass = false;
      detail += fmt(" gamma=%.17g", model.params.gamma);
    }
    const CoefficientTable& tab = model.table;
    const double at_zero = std::abs(tab.density_ratio(0.0)) +
                           std::abs(tab.pressure_density_coef(0.0)) +
                           std::abs(tab.pressure_temp_coef(0.0)) +
                           std::abs(tab.pressure_integral_coef(0.0)) +
                           std::abs(tab.div_coupling_coef(0.0));
    if (at_zero != 0.0) {
      pass = false;
      detail += fmt(" coef(0)=%.2e", at_zero);
    }
    double worst = 0.0;
    for (double a = -0.8; a <= 2.0; a += 0.01)
      worst = std::max(worst, std::abs(tab.pressure_density_coef(a) + tab.density_ratio(a)));
    if (worst > 1e-12) pass = false;
    detail += fmt(" |K1+I|max=%.2e", worst);
  }
  // R = cv away from the unit reference state
  {
    const PhysicalParams phys{0.1, 0.7, 2.3, 2.5, 0.8, 1.7};
    auto model = nondimensionalize(phys, PressureLaw::perfect_gas(2.5));
    if (std::abs(model.params.gamma - 1.0) > 1e-14) {
      pass = false;
      detail += fmt(" generic gamma err=%.2e", std::abs(model.params.gamma - 1.0));
    }
  }
  report(8, "nondimensionalization identities", pass, detail, tm.seconds());
}

}  // namespace

int main() {
  std::printf("acceptance suite (%s)\n", kVersion);
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (failures == 0)
    std::printf("all criteria PASS\n");
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures;
}
