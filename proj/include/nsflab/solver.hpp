#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "nsflab/besov.hpp"
#include "nsflab/io.hpp"
#include "nsflab/nonlinear.hpp"

namespace nsflab {

enum class Scheme { IFRK2, IFRK4 };

// Geometric record times t0 * q^m, plus t = 0.
struct RecordSpec {
  double t0 = 0.1;
  double q = 1.25;

  std::vector<double> times(double t_end) const {
    std::vector<double> out{0.0};
    if (!(t0 > 0.0) || !(q > 1.0)) throw std::invalid_argument("RecordSpec: t0 > 0, q > 1 required");
    for (double t = t0; t <= t_end * (1.0 + 1e-12); t *= q) {
      const double clamped = std::min(t, t_end);
      if (clamped > out.back()) out.push_back(clamped);
    }
    if (out.back() < t_end) out.push_back(t_end);  // always land on the final time
    return out;
  }
};

struct SolverConfig {
  double dt = 0.0;  // 0 = derive from the advective CFL bound
  double t_end = 1.0;
  Scheme scheme = Scheme::IFRK2;
  RecordSpec record;
  double cfl_safety = 0.4;
  bool nonlinear = true;       // false reproduces the exact semigroup
  double record_p = 2.0;       // extra Lebesgue exponent recorded next to p = 2

  void validate() const {
    if (!(t_end >= 0.0)) throw std::invalid_argument("SolverConfig: t_end must be >= 0");
    if (!(cfl_safety > 0.0 && cfl_safety < 1.0))
      throw std::invalid_argument("SolverConfig: cfl_safety must lie in (0, 1)");
    if (dt < 0.0) throw std::invalid_argument("SolverConfig: dt must be >= 0");
  }
};

namespace detail {

// Per-run table of mode exponentials at a fixed step: the matrix depends on
// xi only through |xi|, so one entry per squared integer mode suffices.
class ExpTable {
 public:
  ExpTable() = default;
  ExpTable(const GridSpec& g, const DimensionlessParams& dp, double t) : t_(t) {
    const double step = g.mode_step();
    for_each_mode(g, [&](std::size_t, int k0, int k1, int k2) {
      const long long kk = static_cast<long long>(k0) * k0 + static_cast<long long>(k1) * k1 +
                           static_cast<long long>(k2) * k2;
      if (entries_.count(kk)) return;
      const double rho = step * std::sqrt(static_cast<double>(kk));
      entries_.emplace(kk, mode_semigroup(rho, t, dp));
    });
  }

  double t() const { return t_; }

  // out = E(t) in, mode-wise
  void propagate(const State& in, State& out) const {
    const GridSpec& g = in.grid();
    const int d = g.d;
    const double step = g.mode_step();
    const std::size_t npts = g.points();
    for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
      const long long kk = static_cast<long long>(k0) * k0 + static_cast<long long>(k1) * k1 +
                           static_cast<long long>(k2) * k2;
      if (kk == 0) {
        out.density.coeffs[flat] = in.density.coeffs[flat];
        out.temperature.coeffs[flat] = in.temperature.coeffs[flat];
        for (int c = 0; c < d; ++c)
          out.velocity.coeffs[c * npts + flat] = in.velocity.coeffs[c * npts + flat];
        return;
      }
      const ModeSemigroup& sg = entries_.at(kk);
      const double rho = step * std::sqrt(static_cast<double>(kk));
      const double e[3] = {step * k0 / rho, step * k1 / rho, step * k2 / rho};
      cplx dot(0.0, 0.0);
      for (int c = 0; c < d; ++c) dot += e[c] * in.velocity.coeffs[c * npts + flat];
      const cplx omega = cplx(0.0, 1.0) * dot;
      const Eigen::Matrix3d& M = sg.longitudinal;
      const cplx a0 = in.density.coeffs[flat], th0 = in.temperature.coeffs[flat];
      out.density.coeffs[flat] = M(0, 0) * a0 + M(0, 1) * omega + M(0, 2) * th0;
      const cplx om1 = M(1, 0) * a0 + M(1, 1) * omega + M(1, 2) * th0;
      out.temperature.coeffs[flat] = M(2, 0) * a0 + M(2, 1) * omega + M(2, 2) * th0;
      const cplx long1 = cplx(0.0, -1.0) * om1;
      for (int c = 0; c < d; ++c) {
        const cplx trans = in.velocity.coeffs[c * npts + flat] - dot * e[c];
        out.velocity.coeffs[c * npts + flat] = long1 * e[c] + sg.transverse * trans;
      }
    });
  }

  State propagate(const State& in) const {
    State out(in.grid(), in.time + t_);
    propagate(in, out);
    return out;
  }

 private:
  double t_ = 0.0;
  std::map<long long, ModeSemigroup> entries_;
};

inline State rhs_state(const NonlinearTerms& nl, const GridSpec& g) {
  State r(g);
  r.density = nl.mass;
  r.velocity = nl.momentum;
  r.temperature = nl.heat;
  return r;
}

}  // namespace detail

// One integrating-factor (Lawson) step. The linear part is propagated by the
// exact mode exponentials, so with the nonlinearity disabled the step equals
// apply_semigroup. full: E(dt); half: E(dt/2), needed by IFRK4 only.
inline State step(const State& st, double dt, const DimensionlessParams& dp,
                  const CoefficientTable& tab, Scheme scheme, const detail::ExpTable& full,
                  const detail::ExpTable* half = nullptr, bool nonlinear = true) {
  const GridSpec& g = st.grid();
  if (!nonlinear) {
    State out = full.propagate(st);
    out.time = st.time + dt;
    return out;
  }
  auto rhs = [&](const State& s) {
    return detail::rhs_state(nonlinear_terms(s, tab, dp), g);
  };

  if (scheme == Scheme::IFRK2) {
    // Lawson form of Heun's method
    State k1 = rhs(st);
    State pred = st;
    pred.axpy(dt, k1);
    State epred = full.propagate(pred);  // E(U + dt k1)
    State k2 = rhs(epred);
    State out = st;
    out.axpy(0.5 * dt, k1);
    out = full.propagate(out);
    out.axpy(0.5 * dt, k2);
    out.time = st.time + dt;
    if (!out.finite()) throw std::runtime_error("step: non-finite state (IFRK2) at t = " +
                                                std::to_string(st.time));
    return out;
  }

  // Lawson form of classical RK4
  if (half == nullptr) throw std::invalid_argument("step: IFRK4 needs the half-step table");
  State k1 = rhs(st);

  State s2 = st;
  s2.axpy(0.5 * dt, k1);
  s2 = half->propagate(s2);
  State k2 = rhs(s2);

  State s3 = half->propagate(st);
  s3.axpy(0.5 * dt, k2);
  State k3 = rhs(s3);

  State ehalf_k3 = half->propagate(k3);
  State s4 = full.propagate(st);
  s4.axpy(dt, ehalf_k3);
  State k4 = rhs(s4);

  // U' = E1 U + dt/6 (E1 k1 + 2 E1/2 k2 + 2 E1/2 k3 + k4)
  State acc = st;
  acc.axpy(dt / 6.0, k1);
  acc = full.propagate(acc);
  State mid = k2;
  mid.axpy(1.0, k3);
  mid = half->propagate(mid);
  acc.axpy(dt / 3.0, mid);
  acc.axpy(dt / 6.0, k4);
  acc.time = st.time + dt;
  if (!acc.finite()) throw std::runtime_error("step: non-finite state (IFRK4) at t = " +
                                              std::to_string(st.time));
  return acc;
}

struct IntegrationResult {
  State final_state;
  BlockNormRecord record;
  double dt_used = 0.0;
  long long steps = 0;
  double upper_spectrum_fraction = 0.0;  // resolution diagnostic, reported not asserted
};

namespace detail {

inline std::vector<double> block_row_spectral(const SpectralField& u, const BlockRange& jr,
                                              int deriv_order) {
  const double step = u.grid.mode_step();
  const std::size_t npts = u.grid.points();
  std::vector<double> acc(static_cast<std::size_t>(jr.count()), 0.0);
  for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
    const double r = step * std::sqrt(double(k0) * k0 + double(k1) * k1 + double(k2) * k2);
    double m2 = 0.0;
    for (int c = 0; c < u.comps; ++c) m2 += std::norm(u.coeffs[c * npts + flat]);
    if (m2 == 0.0) return;
    if (deriv_order == 1) m2 *= r * r;
    for (int j = jr.j_min; j <= jr.j_max; ++j) {
      const double w = CutoffProfile::band(r, j);
      if (w != 0.0) acc[static_cast<std::size_t>(j - jr.j_min)] += w * w * m2;
    }
  });
  for (auto& v : acc) v = std::sqrt(v / u.grid.volume());
  return acc;
}

inline std::vector<double> block_row_lp(const SpectralField& u, const BlockRange& jr, double p) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(jr.count()));
  for (int j = jr.j_min; j <= jr.j_max; ++j) out.push_back(block_lp_norm(u, j, p));
  return out;
}

inline void record_state(BlockNormRecord& rec, const State& st, double t, double p_extra) {
  const BlockRange jr = block_range(st.grid());
  SpectralField grad_a = gradient(st.density);
  SpectralField w = effective_velocity(st);

  rec.append_time(t, "a", 2.0, block_row_spectral(st.density, jr, 0));
  rec.append_time(t, "upsilon", 2.0, block_row_spectral(st.velocity, jr, 0));
  rec.append_time(t, "theta", 2.0, block_row_spectral(st.temperature, jr, 0));
  rec.append_time(t, "grad_a", 2.0, block_row_spectral(st.density, jr, 1));
  rec.append_time(t, "grad_upsilon", 2.0, block_row_spectral(st.velocity, jr, 1));
  rec.append_time(t, "weff", 2.0, block_row_spectral(w, jr, 0));
  if (p_extra != 2.0) {
    SpectralField grad_ups(st.grid(), st.grid().d * st.grid().d);
    {
      const std::size_t npts = st.grid().points();
      const int d = st.grid().d;
      for (int ax = 0; ax < d; ++ax) {
        SpectralField dax = apply_multiplier(
            st.velocity, [ax](const std::array<double, 3>& xi) { return cplx(0.0, xi[ax]); });
        for (int c = 0; c < d; ++c)
          for (std::size_t i = 0; i < npts; ++i)
            grad_ups.coeffs[(static_cast<std::size_t>(c) * d + ax) * npts + i] =
                dax.coeffs[c * npts + i];
      }
    }
    rec.append_time(t, "a", p_extra, block_row_lp(st.density, jr, p_extra));
    rec.append_time(t, "upsilon", p_extra, block_row_lp(st.velocity, jr, p_extra));
    rec.append_time(t, "theta", p_extra, block_row_lp(st.temperature, jr, p_extra));
    rec.append_time(t, "grad_a", p_extra, block_row_lp(grad_a, jr, p_extra));
    rec.append_time(t, "grad_upsilon", p_extra, block_row_lp(grad_ups, jr, p_extra));
    rec.append_time(t, "weff", p_extra, block_row_lp(w, jr, p_extra));
  }
}

}  // namespace detail

using StateObserver = std::function<void(const State&, double)>;

// Advances the state to t_end, recording per-block norms of
// (a, v, theta, grad a, grad v, w) at every record time; an optional
// observer sees the state at those times. Deterministic for a given
// configuration.
inline IntegrationResult integrate(const State& initial, const SolverConfig& cfg,
                                   const DimensionlessParams& dp, const CoefficientTable& tab,
                                   const StateObserver& observer = {}) {
  cfg.validate();
  initial.require_consistent();
  const GridSpec& g = initial.grid();
  const BlockRange jr = block_range(g);

  std::vector<double> ps{2.0};
  if (cfg.record_p != 2.0) ps.push_back(cfg.record_p);
  IntegrationResult res{State(g), BlockNormRecord(jr.j_min, jr.j_max,
                                                  {"a", "upsilon", "theta", "grad_a",
                                                   "grad_upsilon", "weff"},
                                                  ps),
                        0.0, 0, 0.0};

  // advective CFL bound from the initial data; diffusion is exact
  double dt_target = cfg.dt;
  if (dt_target == 0.0) {
    const PhysicalField vel = inverse_transform(initial.velocity);
    double vmax = 0.0;
    for (std::size_t i = 0; i < g.points(); ++i) {
      double m2 = 0.0;
      for (int c = 0; c < g.d; ++c) m2 += vel.at(c, i) * vel.at(c, i);
      vmax = std::max(vmax, m2);
    }
    vmax = std::sqrt(vmax);
    dt_target = cfg.cfl_safety * g.spacing() / std::max(1.0, vmax);
  }
  res.dt_used = dt_target;

  State cur = initial;
  detail::record_state(res.record, cur, 0.0, cfg.record_p);
  if (observer) observer(cur, 0.0);

  const std::vector<double> rec_times = cfg.record.times(cfg.t_end);
  std::map<double, detail::ExpTable> full_tables, half_tables;
  auto table_at = [&](std::map<double, detail::ExpTable>& pool, double t) -> const detail::ExpTable& {
    auto it = pool.find(t);
    if (it == pool.end()) it = pool.emplace(t, detail::ExpTable(g, dp, t)).first;
    return it->second;
  };

  double t_now = 0.0;
  for (std::size_t ir = 1; ir < rec_times.size(); ++ir) {
    const double t_next = rec_times[ir];
    const double span = t_next - t_now;
    if (span <= 0.0) continue;
    const long long nsub = std::max(1LL, static_cast<long long>(std::ceil(span / dt_target - 1e-12)));
    const double dt_loc = span / nsub;
    const detail::ExpTable& full = table_at(full_tables, dt_loc);
    const detail::ExpTable* half =
        cfg.scheme == Scheme::IFRK4 ? &table_at(half_tables, 0.5 * dt_loc) : nullptr;
    for (long long i = 0; i < nsub; ++i) {
      cur = step(cur, dt_loc, dp, tab, cfg.scheme, full, half, cfg.nonlinear);
      ++res.steps;
    }
    t_now = t_next;
    cur.time = t_now;
    detail::record_state(res.record, cur, t_now, cfg.record_p);
    if (observer) observer(cur, t_now);
  }

  // fraction of spectral energy in the top third of per-axis mode range
  {
    const int keep = g.n / 3;
    double top = 0.0, total = 0.0;
    const std::size_t npts = g.points();
    auto scan = [&](const SpectralField& u) {
      for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
        double m2 = 0.0;
        for (int c = 0; c < u.comps; ++c) m2 += std::norm(u.coeffs[c * npts + flat]);
        total += m2;
        if (std::abs(k0) > keep || std::abs(k1) > keep || std::abs(k2) > keep) top += m2;
      });
    };
    scan(cur.density);
    scan(cur.velocity);
    scan(cur.temperature);
    res.upper_spectrum_fraction = total > 0.0 ? top / total : 0.0;
  }

  res.final_state = std::move(cur);
  return res;
}

// ---------------------------------------------------------------------------
// Checkpoints: raw little-endian f64 (re, im) pairs in k-order (row-major FFT
// layout), fields in the order density, velocity components, temperature,
// with a JSON sidecar <path>.json carrying {grid, params, t}.
// ---------------------------------------------------------------------------

inline void save_checkpoint(const State& st, const DimensionlessParams& dp,
                            const std::string& path) {
  st.require_consistent();
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("save_checkpoint: cannot open " + path);
  auto dump = [&](const SpectralField& u) {
    for (const cplx& c : u.coeffs) {
      const double re = c.real(), im = c.imag();
      bin.write(reinterpret_cast<const char*>(&re), sizeof re);
      bin.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  };
  dump(st.density);
  dump(st.velocity);
  dump(st.temperature);
  bin.close();

  JsonValue side = JsonValue::object();
  side["grid"]["d"] = st.grid().d;
  side["grid"]["n"] = st.grid().n;
  side["grid"]["box_len"] = st.grid().box_len;
  side["params"]["beta"] = dp.beta;
  side["params"]["gamma"] = dp.gamma;
  side["params"]["mu_tilde"] = dp.mu_tilde;
  side["t"] = st.time;
  side["version"] = kVersion;
  std::ofstream js(path + ".json");
  js << side.dump() << '\n';
}

struct Checkpoint {
  State state;
  DimensionlessParams params;
};

Checkpoint load_checkpoint(const std::string& path);  // defined in config.hpp (JSON parsing)

}  // namespace nsflab
