#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "nsflab/matexp.hpp"
#include "nsflab/state.hpp"

namespace nsflab {

// Dimensionless coefficients of the reformulated system: heat diffusivity
// beta, density-temperature coupling gamma, shear fraction mu_tilde = mu/nu.
struct DimensionlessParams {
  double beta = 1.0;
  double gamma = 1.0;
  double mu_tilde = 0.5;

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("DimensionlessParams: beta must be > 0");
    if (!(mu_tilde > 0.0 && mu_tilde <= 1.0))
      throw std::invalid_argument("DimensionlessParams: mu_tilde must lie in (0, 1]");
    if (!(gamma >= 0.0)) throw std::invalid_argument("DimensionlessParams: gamma must be >= 0");
  }
};

// Generator of the frequency-wise dynamics of (A, Omega, Theta) at |xi| = rho:
// the Fourier transform of (density, longitudinal velocity, temperature).
inline Eigen::Matrix3d symbol_matrix(double rho, const DimensionlessParams& dp) {
  if (!(rho >= 0.0)) throw std::invalid_argument("symbol_matrix: rho must be >= 0");
  Eigen::Matrix3d L;
  L << 0.0, -rho, 0.0,
       rho, -rho * rho, dp.gamma * rho,
       0.0, -dp.gamma * rho, -dp.beta * rho * rho;
  return L;
}

struct ModeSemigroup {
  Eigen::Matrix3d longitudinal;  // exp(t L(rho)) acting on (A, Omega, Theta)
  double transverse;             // exp(-mu_tilde rho^2 t) for the solenoidal part
};

inline ModeSemigroup mode_semigroup(double rho, double t, const DimensionlessParams& dp) {
  if (!(t >= 0.0)) throw std::invalid_argument("mode_semigroup: t must be >= 0");
  return {matrix_exponential(t * symbol_matrix(rho, dp)),
          std::exp(-dp.mu_tilde * rho * rho * t)};
}

inline double spectral_abscissa(double rho, const DimensionlessParams& dp) {
  Eigen::EigenSolver<Eigen::Matrix3d> es(symbol_matrix(rho, dp), false);
  return es.eigenvalues().real().maxCoeff();
}

// Exact linear propagator E(t) applied mode-wise to a spectral state.
// Per mode xi != 0 the velocity splits into the longitudinal scalar
// Omega = i (xi/|xi|) . v and the transverse remainder; (A, Omega, Theta)
// moves by exp(t L(|xi|)), the remainder by the heat factor. The zero mode
// is held fixed.
inline State apply_semigroup(const State& st, double t, const DimensionlessParams& dp) {
  st.require_consistent();
  if (!(t >= 0.0)) throw std::invalid_argument("apply_semigroup: t must be >= 0");
  const GridSpec& g = st.grid();
  const int d = g.d;
  const double step = g.mode_step();
  State out(g, st.time + t);

  // L(rho) depends on xi only through |xi|; cache per squared integer mode.
  std::map<long long, ModeSemigroup> cache;
  auto fetch = [&](long long k2) -> const ModeSemigroup& {
    auto it = cache.find(k2);
    if (it != cache.end()) return it->second;
    const double rho = step * std::sqrt(static_cast<double>(k2));
    return cache.emplace(k2, mode_semigroup(rho, t, dp)).first->second;
  };

  const std::size_t npts = g.points();
  const cplx* a_in = st.density.comp(0);
  const cplx* th_in = st.temperature.comp(0);
  cplx* a_out = out.density.comp(0);
  cplx* th_out = out.temperature.comp(0);

  for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
    const long long kk = static_cast<long long>(k0) * k0 + static_cast<long long>(k1) * k1 +
                         static_cast<long long>(k2) * k2;
    if (kk == 0) {
      a_out[flat] = a_in[flat];
      th_out[flat] = th_in[flat];
      for (int c = 0; c < d; ++c) out.velocity.coeffs[c * npts + flat] = st.velocity.coeffs[c * npts + flat];
      return;
    }
    const ModeSemigroup& sg = fetch(kk);
    const double rho = step * std::sqrt(static_cast<double>(kk));
    double e[3] = {step * k0 / rho, step * k1 / rho, step * k2 / rho};

    cplx dot(0.0, 0.0);
    for (int c = 0; c < d; ++c) dot += e[c] * st.velocity.coeffs[c * npts + flat];
    const cplx omega = cplx(0.0, 1.0) * dot;

    const Eigen::Matrix3d& M = sg.longitudinal;
    const cplx a0 = a_in[flat], th0 = th_in[flat];
    const cplx a1 = M(0, 0) * a0 + M(0, 1) * omega + M(0, 2) * th0;
    const cplx om1 = M(1, 0) * a0 + M(1, 1) * omega + M(1, 2) * th0;
    const cplx th1 = M(2, 0) * a0 + M(2, 1) * omega + M(2, 2) * th0;

    a_out[flat] = a1;
    th_out[flat] = th1;
    const cplx long1 = cplx(0.0, -1.0) * om1;  // longitudinal amplitude e . v
    for (int c = 0; c < d; ++c) {
      const cplx trans = st.velocity.coeffs[c * npts + flat] - dot * e[c];
      out.velocity.coeffs[c * npts + flat] = long1 * e[c] + sg.transverse * trans;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Lyapunov machinery of the frequency-wise energy method.
// ---------------------------------------------------------------------------

struct LyapunovData {
  double beta_tilde = 0.0;
  double K = 0.0;            // functional weight, K (1 + gamma^2) = beta_tilde
  double K_used = 0.0;       // weight of the certified functional (K/2 when gamma = 0)
  double C0 = 1.0;           // norm-equivalence constant vs |(A, rho A, Omega, Theta)|^2
  double c0 = 0.0;           // constructive decay rate from the dissipation-form scan
  double rho0 = 1.0;         // frequency cap of the scan
  double minimizing_rho = 0.0;
  double c0_exact = 0.0;     // scan against the exact derivative of the functional
  double c0_young = 0.0;     // closed-form value from the Young-inequality chain
};

// Quadratic form of the Lyapunov functional:
// L^2 = |(A,Omega,Theta)|^2 + K(|rho A|^2 - 2 rho Re(A conj(Omega))).
inline Eigen::Matrix3d lyapunov_form(double rho, double K) {
  Eigen::Matrix3d G;
  G << 1.0 + K * rho * rho, -K * rho, 0.0,
       -K * rho, 1.0, 0.0,
       0.0, 0.0, 1.0;
  return G;
}

inline double lyapunov_condition(double rho, double K) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(lyapunov_form(rho, K));
  return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

namespace detail {

// Dissipation quadratic form divided by rho^2.
//
// paper_form: beta_tilde diag(2/(1+g^2), g^2/(1+g^2), 2), the displayed
// post-Young form. exact_form: the exact -d/dt of the functional,
// 2 [K|A|^2 + (1-K)|Omega|^2 + beta|Theta|^2 + K g Re(Theta conj(A))].
inline Eigen::Matrix3d dissipation_paper(const DimensionlessParams& dp, double K,
                                         double beta_tilde) {
  (void)K;
  const double g2 = dp.gamma * dp.gamma;
  Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
  D(0, 0) = beta_tilde * 2.0 / (1.0 + g2);
  D(1, 1) = beta_tilde * g2 / (1.0 + g2);
  D(2, 2) = beta_tilde * 2.0;
  return D;
}

inline Eigen::Matrix3d dissipation_exact(const DimensionlessParams& dp, double K) {
  Eigen::Matrix3d D;
  D << 2.0 * K, 0.0, K * dp.gamma,
       0.0, 2.0 * (1.0 - K), 0.0,
       K * dp.gamma, 0.0, 2.0 * dp.beta;
  return D;
}

inline double pencil_min_eig(const Eigen::Matrix3d& D, const Eigen::Matrix3d& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> gs(G);
  const Eigen::Vector3d w = gs.eigenvalues();
  const Eigen::Matrix3d Gih =
      gs.eigenvectors() * w.cwiseSqrt().cwiseInverse().asDiagonal() * gs.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Gih * D * Gih);
  return es.eigenvalues().minCoeff();
}

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  v.back() = hi;
  return v;
}

}  // namespace detail

namespace detail {
// Worst condition constant of the K-weighted functional against
// |(A, rho A, Omega, Theta)|^2 over rho in [0, rho0].
inline double equivalence_constant(double K, double rho0) {
  double c0max = 1.0;
  auto probe = [&](double rho) {
    const Eigen::Matrix3d G = lyapunov_form(rho, K);
    Eigen::Matrix3d H = Eigen::Matrix3d::Identity();
    H(0, 0) = 1.0 + rho * rho;
    // extreme generalized eigenvalues of (G, H)
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> hs(H);
    const Eigen::Matrix3d Hih = hs.eigenvectors() *
                                hs.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                hs.eigenvectors().transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Hih * G * Hih);
    c0max = std::max({c0max, es.eigenvalues().maxCoeff(), 1.0 / es.eigenvalues().minCoeff()});
  };
  probe(0.0);
  for (double rho : geometric_grid(rho0 / 100.0, rho0, 64)) probe(rho);
  return c0max;
}
}  // namespace detail

// K solving K gamma^2 = beta_tilde - K, plus the worst-case condition
// constant of the functional over rho in [0, rho0]. With gamma = 0 the
// certified functional halves the weight (the full K makes the exact
// dissipation form singular when beta >= 1); K keeps the algebraic value.
inline LyapunovData lyapunov_constants(const DimensionlessParams& dp, double rho0 = 1.0) {
  dp.validate();
  LyapunovData out;
  out.beta_tilde = std::min(1.0, dp.beta);
  out.K = out.beta_tilde / (1.0 + dp.gamma * dp.gamma);
  out.K_used = dp.gamma == 0.0 ? 0.5 * out.K : out.K;
  out.rho0 = rho0;
  out.C0 = detail::equivalence_constant(out.K_used, rho0);
  return out;
}

// Constructive exponential rate of the Lyapunov functional on (0, rho0]:
// c0 = inf over the scan grid of lambda_min(G^{-1/2} D G^{-1/2}) / rho^2.
// D is the displayed dissipation form; for gamma = 0 that form is singular
// in Omega and the exact derivative form takes over. The scan value for the
// exact form and the closed-form Young-chain constant are reported alongside.
inline LyapunovData constructive_rate(const DimensionlessParams& dp, double rho0 = 1.0) {
  if (!(rho0 > 0.0)) throw std::invalid_argument("constructive_rate: rho0 must be > 0");
  LyapunovData out = lyapunov_constants(dp, rho0);

  const bool degenerate = dp.gamma == 0.0;
  double best = std::numeric_limits<double>::infinity();
  double best_exact = std::numeric_limits<double>::infinity();
  double argmin = rho0;
  for (double rho : detail::geometric_grid(rho0 / 100.0, rho0, 64)) {
    const Eigen::Matrix3d G = lyapunov_form(rho, out.K_used);
    const Eigen::Matrix3d Dex = rho * rho * detail::dissipation_exact(dp, out.K_used);
    const double rate_exact = detail::pencil_min_eig(Dex, G) / (rho * rho);
    best_exact = std::min(best_exact, rate_exact);
    double rate = rate_exact;
    if (!degenerate) {
      const Eigen::Matrix3d Dp =
          rho * rho * detail::dissipation_paper(dp, out.K_used, out.beta_tilde);
      rate = detail::pencil_min_eig(Dp, G) / (rho * rho);
    }
    if (rate < best) {
      best = rate;
      argmin = rho;
    }
  }
  out.c0 = best;
  out.c0_exact = best_exact;
  out.minimizing_rho = argmin;

  // Young-chain closed form: D >= min-diag |.|^2 and L^2 <= C0 (1+rho0^2)|.|^2.
  const double g2 = dp.gamma * dp.gamma;
  const double mdiag = degenerate
                           ? std::min({2.0 * out.K_used, 2.0 * (1.0 - out.K_used), 2.0 * dp.beta})
                           : out.beta_tilde * std::min(g2, 2.0) / (1.0 + g2);
  out.c0_young = mdiag / (out.C0 * (1.0 + rho0 * rho0));
  return out;
}

// Operator-norm decay envelope of one dyadic block of the propagator.
struct BlockEnvelope {
  int j = 0;
  std::vector<double> t;
  std::vector<double> value;      // sup over the annulus of ||exp(t L(rho))||_2
  double fitted_rate = 0.0;       // from the log-linear fit over the t grid
  double rate_per_block = 0.0;    // fitted_rate / 2^{2j}
  bool certified = false;         // fitted_rate >= (c0/2) (3 2^j / 4)^2
};

inline BlockEnvelope block_decay_envelope(int j, const DimensionlessParams& dp,
                                          const std::vector<double>& t_grid, int j0 = 0,
                                          int annulus_samples = 33) {
  if (j > j0) throw std::invalid_argument("block_decay_envelope: block above the low/high threshold");
  if (t_grid.size() < 2) throw std::invalid_argument("block_decay_envelope: need a time grid");
  BlockEnvelope env;
  env.j = j;
  env.t = t_grid;
  const double rin = 0.75 * std::ldexp(1.0, j);
  const double rout = (8.0 / 3.0) * std::ldexp(1.0, j);
  const auto rhos = detail::geometric_grid(rin, rout, annulus_samples);
  env.value.resize(t_grid.size());
  for (std::size_t it = 0; it < t_grid.size(); ++it) {
    double sup = 0.0;
    for (double rho : rhos)
      sup = std::max(sup, operator_two_norm(matrix_exponential(t_grid[it] * symbol_matrix(rho, dp))));
    env.value[it] = sup;
  }
  // log-linear least squares: log value = intercept - rate * t
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const std::size_t m = t_grid.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double x = t_grid[i], y = std::log(env.value[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  env.fitted_rate = -slope;
  env.rate_per_block = env.fitted_rate / std::ldexp(1.0, 2 * j);
  const double c0 = constructive_rate(dp).c0;
  env.certified = env.fitted_rate >= 0.5 * c0 * rin * rin;
  return env;
}

}  // namespace nsflab
