#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "nsflab/besov.hpp"

namespace nsflab {

// Observed constant in the nonlinear Bernstein inequality on fields whose
// spectrum sits in the block-j annulus:
//   c 2^{2j} ((p-1)/p) int |f|^p  <=  (p-1) int |grad f|^2 |f|^{p-2}.
// Returns the minimum over random trial fields of the left-over ratio.
struct BernsteinResult {
  double observed_constant = 0.0;  // min over trials, normalized as above
  double plain_ratio_min = 0.0;    // int|grad f|^2 / (2^{2j} int|f|^2), p = 2 only
  double plain_ratio_max = 0.0;
  int trials_used = 0;
};

inline BernsteinResult check_bernstein(const GridSpec& grid, int j, double p, int trials,
                                       unsigned seed = 2024u) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("check_bernstein: p in (1, inf)");
  BernsteinResult res;
  res.observed_constant = std::numeric_limits<double>::infinity();
  res.plain_ratio_min = std::numeric_limits<double>::infinity();
  res.plain_ratio_max = 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double lo = 0.75 * std::ldexp(1.0, j);
  const double hi = (8.0 / 3.0) * std::ldexp(1.0, j);
  const double step = grid.mode_step();
  const double four_j = std::ldexp(1.0, 2 * j);

  for (int t = 0; t < trials; ++t) {
    PhysicalField noise(grid, 1);
    for (auto& v : noise.values) v = dist(rng);
    SpectralField u = forward_transform(noise);
    for_each_mode(grid, [&](std::size_t flat, int k0, int k1, int k2) {
      const double r = step * std::sqrt(double(k0) * k0 + double(k1) * k1 + double(k2) * k2);
      if (r < lo || r > hi) u.coeffs[flat] = cplx(0.0, 0.0);
    });
    PhysicalField f = inverse_transform(u);
    PhysicalField gf = inverse_transform(gradient(u));

    const std::size_t npts = grid.points();
    double int_fp = 0.0, int_grad = 0.0, int_f2 = 0.0, int_grad2 = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
      const double fv = f.values[i];
      double g2 = 0.0;
      for (int c = 0; c < grid.d; ++c) g2 += gf.at(c, i) * gf.at(c, i);
      int_fp += std::pow(std::abs(fv), p);
      int_grad += g2 * std::pow(std::abs(fv), p - 2.0);
      int_f2 += fv * fv;
      int_grad2 += g2;
    }
    if (int_fp == 0.0) continue;  // degenerate draw
    ++res.trials_used;
    const double c_obs = ((p - 1.0) * int_grad) / (four_j * ((p - 1.0) / p) * int_fp);
    res.observed_constant = std::min(res.observed_constant, c_obs);
    const double plain = int_grad2 / (four_j * int_f2);
    res.plain_ratio_min = std::min(res.plain_ratio_min, plain);
    res.plain_ratio_max = std::max(res.plain_ratio_max, plain);
  }
  if (res.trials_used == 0) throw std::runtime_error("check_bernstein: all trials degenerate");
  return res;
}

// Residual of the integration-by-parts identity behind the Bernstein bound,
//   -int Delta f |f|^{p-2} f = (p-1) int |grad f|^2 |f|^{p-2},
// relative to the magnitude of the right-hand side. Valid as grid quadrature
// while p * (block bandwidth) stays below the Nyquist range.
inline double bernstein_identity_residual(const GridSpec& grid, int j, double p, unsigned seed = 7u) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PhysicalField noise(grid, 1);
  for (auto& v : noise.values) v = dist(rng);
  SpectralField u = forward_transform(noise);
  const double lo = 0.75 * std::ldexp(1.0, j), hi = (8.0 / 3.0) * std::ldexp(1.0, j);
  const double step = grid.mode_step();
  for_each_mode(grid, [&](std::size_t flat, int k0, int k1, int k2) {
    const double r = step * std::sqrt(double(k0) * k0 + double(k1) * k1 + double(k2) * k2);
    if (r < lo || r > hi) u.coeffs[flat] = cplx(0.0, 0.0);
  });
  PhysicalField f = inverse_transform(u);
  PhysicalField gf = inverse_transform(gradient(u));
  PhysicalField lf = inverse_transform(laplacian(u));
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const double fv = f.values[i];
    const double w = std::pow(std::abs(fv), p - 2.0);
    double g2 = 0.0;
    for (int c = 0; c < grid.d; ++c) g2 += gf.at(c, i) * gf.at(c, i);
    lhs += -lf.values[i] * w * fv;
    rhs += (p - 1.0) * g2 * w;
  }
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

// Block-wise log-convexity of Besov norms at r = infinity:
//   ||f||_{B^{th s2 + (1-th) s1}_{p,inf}} <= ||f||^{1-th}_{s1} ||f||^{th}_{s2},
// with constant exactly 1. Returns (lhs, rhs).
struct InterpolationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

inline InterpolationCheck check_interpolation(const SpectralField& u, double s1, double s2,
                                              double theta, double p) {
  if (s1 == s2) throw std::invalid_argument("check_interpolation: s1 != s2 required");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("check_interpolation: theta in (0,1) required");
  const double inf = BesovParams::inf;
  InterpolationCheck out;
  out.lhs = besov_norm(u, {theta * s2 + (1.0 - theta) * s1, p, inf});
  out.rhs = std::pow(besov_norm(u, {s1, p, inf}), 1.0 - theta) *
            std::pow(besov_norm(u, {s2, p, inf}), theta);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

// Embedding L^q -> B^{-sigma}_{r,inf} with 1/q - 1/r = sigma/d: reports the
// observed ratio ||u||_{B^{-sigma}_{r,inf}} / ||u||_{L^q}. The hidden
// constant depends on the cutoff profile, so the ratio is recorded rather
// than asserted against a fixed bound.
inline double check_embedding(const SpectralField& u, double sigma, double q) {
  if (!(sigma > 0.0)) throw std::invalid_argument("check_embedding: sigma > 0 required");
  if (!(q >= 1.0 && q < 2.0)) throw std::invalid_argument("check_embedding: q in [1, 2) required");
  const double d = u.grid.d;
  const double inv_r = 1.0 / q - sigma / d;
  if (!(inv_r > 0.0)) throw std::invalid_argument("check_embedding: 1/q - sigma/d must be > 0");
  const double r = 1.0 / inv_r;
  const double num = besov_norm(u, {-sigma, r, BesovParams::inf});
  const double den = lp_norm(inverse_transform(u), q);
  if (den == 0.0) return 0.0;
  return num / den;
}

// Lemma-style p1 = 2 -> p2 = p embedding ratio at regularity drop
// d(1/2 - 1/p): ||u||_{B^{s - d(1/2-1/p)}_{p,1}} / ||u||_{B^s_{2,1}}.
inline double embedding_ratio_2_to_p(const SpectralField& u, double s, double p) {
  const double d = u.grid.d;
  const double s2 = s - d * (0.5 - 1.0 / p);
  const double num = besov_norm(u, {s2, p, 1.0});
  const double den = besov_norm(u, {s, 2.0, 1.0});
  if (den == 0.0) return 0.0;
  return num / den;
}

}  // namespace nsflab
