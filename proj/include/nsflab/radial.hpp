#pragma once

#include <cmath>
#include <vector>

#include "nsflab/besov.hpp"
#include "nsflab/harness_types.hpp"
#include "nsflab/linear.hpp"

namespace nsflab {

// Grid-free radial evolution for pure-linear decay studies in d = 3: the
// state is a radial spectral profile (A, Omega, Theta, transverse magnitude)
// on a geometric |xi| grid; block L2 norms come from 1-d quadrature of the
// mode energies, so no box effects enter. A frequency floor emulates a
// periodic box when requested.
class RadialModel {
 public:
  RadialModel(const DimensionlessParams& dp, int j_lo, int j_hi, int pts_per_octave = 48,
              double rho_floor = 0.0)
      : dp_(dp), j_lo_(j_lo), j_hi_(j_hi) {
    dp.validate();
    const double rmin = std::max(0.75 * std::ldexp(1.0, j_lo), 1e-12);
    const double rmax = (8.0 / 3.0) * std::ldexp(1.0, j_hi);
    const int n = static_cast<int>(std::ceil(std::log2(rmax / rmin) * pts_per_octave)) + 1;
    rho_.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double r = rmin * std::pow(rmax / rmin, double(i) / (n - 1));
      if (r >= rho_floor) rho_.push_back(r);
    }
    weight_.assign(rho_.size(), 0.0);
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      const double lo = i == 0 ? rho_[0] : rho_[i - 1];
      const double hi = i + 1 == rho_.size() ? rho_.back() : rho_[i + 1];
      weight_[i] = 0.5 * (hi - lo);  // trapezoid measure d rho
    }
  }

  int j_lo() const { return j_lo_; }
  int j_hi() const { return j_hi_; }
  const std::vector<double>& rho() const { return rho_; }

  struct Profile {
    std::vector<double> density, longitudinal, temperature, transverse;
  };

  // |U0|(rho) = amplitude * exp(-rho^2 w^2 / 2) on all four channels.
  Profile gaussian_profile(double amplitude, double width) const {
    Profile pr;
    fill(pr, [&](double r) { return amplitude * std::exp(-0.5 * r * r * width * width); });
    return pr;
  }

  // |U0|(rho) = amplitude * rho^{s1 - d/2} * chi(rho): every low block then
  // carries a comparable share of the B^{-s1}_{2,inf} norm.
  Profile power_profile(double amplitude, double s1) const {
    const double expo = s1 - 1.5;  // d = 3
    Profile pr;
    fill(pr, [&](double r) { return amplitude * std::pow(r, expo) * CutoffProfile::chi(r); });
    return pr;
  }

  struct BlockRows {
    std::vector<double> density, velocity, temperature;
    std::vector<double> grad_density, grad_velocity, effective;
  };

  // Per-block L2 norms at time t under the exact propagator:
  // |upsilon|^2 = |Omega|^2 + |transverse|^2, gradients carry a |xi| weight
  // and the effective velocity has magnitude |A - rho Omega| / rho.
  BlockRows block_norms(const Profile& p0, double t) const {
    const int nj = j_hi_ - j_lo_ + 1;
    BlockRows rows;
    for (auto* row : {&rows.density, &rows.velocity, &rows.temperature, &rows.grad_density,
                      &rows.grad_velocity, &rows.effective})
      row->assign(nj, 0.0);
    const double pref = 4.0 * kPi / std::pow(2.0 * kPi, 3);  // S_2 / (2 pi)^3
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      const double r = rho_[i];
      const ModeSemigroup sg = mode_semigroup(r, t, dp_);
      const Eigen::Vector3d v0(p0.density[i], p0.longitudinal[i], p0.temperature[i]);
      const Eigen::Vector3d v = sg.longitudinal * v0;
      const double trans = sg.transverse * p0.transverse[i];
      const double u2 = v[1] * v[1] + trans * trans;
      const double weff = (v[0] - r * v[1]) / r;
      const double meas = pref * r * r * weight_[i];
      for (int j = j_lo_; j <= j_hi_; ++j) {
        const double w = CutoffProfile::band(r, j);
        if (w == 0.0) continue;
        const double w2 = w * w * meas;
        rows.density[j - j_lo_] += w2 * v[0] * v[0];
        rows.velocity[j - j_lo_] += w2 * u2;
        rows.temperature[j - j_lo_] += w2 * v[2] * v[2];
        rows.grad_density[j - j_lo_] += w2 * r * r * v[0] * v[0];
        rows.grad_velocity[j - j_lo_] += w2 * r * r * u2;
        rows.effective[j - j_lo_] += w2 * weff * weff;
      }
    }
    for (auto* row : {&rows.density, &rows.velocity, &rows.temperature, &rows.grad_density,
                      &rows.grad_velocity, &rows.effective})
      for (auto& v : *row) v = std::sqrt(v);
    return rows;
  }

  // Records the six tracked components at p = 2 over the given times.
  BlockNormRecord record(const Profile& p0, const std::vector<double>& times) const {
    BlockNormRecord rec(j_lo_, j_hi_,
                        {"a", "upsilon", "theta", "grad_a", "grad_upsilon", "weff"}, {2.0});
    for (double t : times) {
      const BlockRows rows = block_norms(p0, t);
      rec.append_time(t, "a", 2.0, rows.density);
      rec.append_time(t, "upsilon", 2.0, rows.velocity);
      rec.append_time(t, "theta", 2.0, rows.temperature);
      rec.append_time(t, "grad_a", 2.0, rows.grad_density);
      rec.append_time(t, "grad_upsilon", 2.0, rows.grad_velocity);
      rec.append_time(t, "weff", 2.0, rows.effective);
    }
    return rec;
  }

  // sup_{j <= j0} 2^{-j s1} ||block_j U0||_{L2}: the low-frequency
  // B^{-s1}_{2,inf} norm of the data (triple = sum of component norms).
  double data_low_norm(const Profile& p0, double s1, int j0) const {
    const BlockRows rows = block_norms(p0, 0.0);
    double sup = 0.0;
    for (int j = j_lo_; j <= std::min(j0, j_hi_); ++j) {
      const double w = std::pow(2.0, -j * s1);
      sup = std::max(sup, w * (rows.density[j - j_lo_] + rows.velocity[j - j_lo_] +
                               rows.temperature[j - j_lo_]));
    }
    return sup;
  }

 private:
  template <class Fn>
  void fill(Profile& pr, Fn&& amp) const {
    const std::size_t n = rho_.size();
    pr.density.resize(n);
    pr.longitudinal.resize(n);
    pr.temperature.resize(n);
    pr.transverse.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = amp(rho_[i]);
      pr.density[i] = a;
      pr.longitudinal[i] = a;
      pr.temperature[i] = a;
      pr.transverse[i] = a;
    }
  }

  DimensionlessParams dp_;
  int j_lo_, j_hi_;
  std::vector<double> rho_;
  std::vector<double> weight_;
};

}  // namespace nsflab
