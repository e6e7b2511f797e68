#pragma once

// Test-only reference computations, kept independent of the library's own
// evaluation paths.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "nsflab/fft.hpp"

namespace oracle {

using nsflab::cplx;
using nsflab::GridSpec;
using nsflab::PhysicalField;
using nsflab::SpectralField;

// Direct O(N^2) discrete Fourier sum with the continuum-calibrated h^d factor.
inline SpectralField direct_dft(const PhysicalField& f) {
  SpectralField out(f.grid, f.comps);
  const GridSpec& g = f.grid;
  const std::size_t npts = g.points();
  const double h = g.spacing();
  const double scale = g.cell_measure();
  for (int c = 0; c < f.comps; ++c) {
    for (std::size_t kf = 0; kf < npts; ++kf) {
      const auto k = g.signed_modes(kf);
      cplx acc(0.0, 0.0);
      for (std::size_t xf = 0; xf < npts; ++xf) {
        // x index decomposition, row-major
        std::size_t rem = xf;
        int xi[3] = {0, 0, 0};
        for (int ax = g.d - 1; ax >= 0; --ax) {
          xi[ax] = static_cast<int>(rem % g.n);
          rem /= g.n;
        }
        double phase = 0.0;
        for (int ax = 0; ax < g.d; ++ax)
          phase -= (2.0 * nsflab::kPi / g.box_len) * k[ax] * (h * xi[ax]);
        acc += f.at(c, xf) * cplx(std::cos(phase), std::sin(phase));
      }
      out.at(c, kf) = scale * acc;
    }
  }
  return out;
}

inline PhysicalField random_field(const GridSpec& g, int comps, unsigned seed) {
  PhysicalField f(g, comps);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : f.values) v = dist(rng);
  return f;
}

// Random real field whose spectrum is confined to the annulus of block j.
inline SpectralField random_annulus_field(const GridSpec& g, int j, unsigned seed) {
  PhysicalField f = random_field(g, 1, seed);
  SpectralField u = nsflab::forward_transform(f);
  const double s = g.mode_step();
  const double lo = 0.75 * std::ldexp(1.0, j);
  const double hi = (8.0 / 3.0) * std::ldexp(1.0, j);
  nsflab::for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
    const double r = s * std::sqrt(double(k0) * k0 + double(k1) * k1 + double(k2) * k2);
    if (r < lo || r > hi) u.coeffs[flat] = cplx(0.0, 0.0);
  });
  return u;
}

// Taylor-series matrix exponential with pre-scaling; independent of the
// Pade implementation under test.
inline Eigen::Matrix3d taylor_expm(const Eigen::Matrix3d& A, int terms = 60) {
  double nrm = A.cwiseAbs().colwise().sum().maxCoeff();
  int m = 0;
  while (nrm > 0.5) {
    nrm /= 2.0;
    ++m;
  }
  const Eigen::Matrix3d As = A / std::ldexp(1.0, m);
  Eigen::Matrix3d sum = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= terms; ++k) {
    term = term * As / double(k);
    sum += term;
  }
  for (int i = 0; i < m; ++i) sum = sum * sum;
  return sum;
}

// Adaptive Simpson quadrature on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-11,
                      int depth = 24) {
  std::function<double(double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, int dep) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
    const double fl = f(lmid), fr = f(rmid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    if (dep <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right;
    return rec(lo, mid, flo, fl, fmid, dep - 1) + rec(mid, hi, fmid, fr, fhi, dep - 1);
  };
  const double mid = 0.5 * (a + b);
  return rec(a, b, f(a), f(mid), f(b), depth);
}

}  // namespace oracle
