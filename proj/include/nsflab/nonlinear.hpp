#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nsflab/fft.hpp"
#include "nsflab/multiplier.hpp"
#include "nsflab/params.hpp"
#include "nsflab/state.hpp"

namespace nsflab {

inline constexpr double kVacuumFloor = 0.1;  // enforced lower bound on 1 + a

// 2/3-rule mask: zero every mode with a per-axis index above n/3. Quadratic
// products of masked fields then alias only into discarded modes.
inline void dealias(SpectralField& u) {
  const int keep = u.grid.n / 3;
  if (keep < 2) throw std::invalid_argument("dealias: resolution insufficient for the 2/3 rule");
  const std::size_t npts = u.grid.points();
  for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
    if (std::abs(k0) > keep || std::abs(k1) > keep || std::abs(k2) > keep)
      for (int c = 0; c < u.comps; ++c) u.coeffs[c * npts + flat] = cplx(0.0, 0.0);
  });
}

inline void dealias(State& st) {
  dealias(st.density);
  dealias(st.velocity);
  dealias(st.temperature);
}

// A~ v = mu~ Lap v + (1 - mu~) grad div v as an exact matrix-valued multiplier.
inline SpectralField lame_operator(const SpectralField& v, double mu_tilde) {
  const int d = v.grid.d;
  return apply_matrix_multiplier(v, [d, mu_tilde](const std::array<double, 3>& xi) {
    std::array<cplx, 9> M{};
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double val = i == j ? -mu_tilde * r2 : 0.0;
        val -= (1.0 - mu_tilde) * xi[i] * xi[j];
        M[i * d + j] = cplx(val, 0.0);
      }
    return M;
  });
}

// Pointwise coefficient fields evaluated on the physical realization of the
// density perturbation. Fails when the vacuum guard trips.
struct CoefficientFields {
  PhysicalField density_ratio;          // I(a)
  PhysicalField pressure_density;       // K1(a)
  PhysicalField pressure_temp;          // K2(a)
  PhysicalField pressure_integral;      // K3(a)
  PhysicalField div_coupling;           // K~1(a)
  PhysicalField div_coupling_temp;      // K~2(a)
};

inline CoefficientFields coefficient_functions(const PhysicalField& a, const CoefficientTable& tab) {
  if (a.comps != 1) throw std::invalid_argument("coefficient_functions: scalar field required");
  double amin = std::numeric_limits<double>::infinity();
  for (double v : a.values) amin = std::min(amin, v);
  if (!(1.0 + amin > 0.0))
    throw std::domain_error("coefficient_functions: vacuum reached (1 + a <= 0)");
  CoefficientFields out{PhysicalField(a.grid, 1), PhysicalField(a.grid, 1),
                        PhysicalField(a.grid, 1), PhysicalField(a.grid, 1),
                        PhysicalField(a.grid, 1), PhysicalField(a.grid, 1)};
  const std::size_t npts = a.grid.points();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < npts; ++i) {
    const double av = a.values[i];
    out.density_ratio.values[i] = tab.density_ratio(av);
    out.pressure_density.values[i] = tab.pressure_density_coef(av);
    out.pressure_temp.values[i] = tab.pressure_temp_coef(av);
    out.pressure_integral.values[i] = tab.pressure_integral_coef(av);
    out.div_coupling.values[i] = tab.div_coupling_coef(av);
    out.div_coupling_temp.values[i] = tab.div_coupling_temp_coef(av);
  }
  return out;
}

struct NonlinearTerms {
  SpectralField mass;      // f  (scalar)
  SpectralField momentum;  // g  (vector)
  SpectralField heat;      // k  (scalar)
};

// Right-hand sides of the reformulated system. Products are formed pointwise
// in physical space on the 2/3-dealiased grid; every derivative is spectral.
inline NonlinearTerms nonlinear_terms(const State& st, const CoefficientTable& tab,
                                      const DimensionlessParams& dp) {
  st.require_consistent();
  const GridSpec& g = st.grid();
  const int d = g.d;
  const std::size_t npts = g.points();

  PhysicalField a = inverse_transform(st.density);
  PhysicalField vel = inverse_transform(st.velocity);
  PhysicalField th = inverse_transform(st.temperature);
  double amin = std::numeric_limits<double>::infinity();
  for (double v : a.values) amin = std::min(amin, v);
  if (!(1.0 + amin >= kVacuumFloor))
    throw std::domain_error("nonlinear_terms: vacuum guard tripped (min(1+a) < 0.1)");

  CoefficientFields cf = coefficient_functions(a, tab);

  PhysicalField grad_a = inverse_transform(gradient(st.density));
  PhysicalField grad_th = inverse_transform(gradient(st.temperature));
  PhysicalField lap_th = inverse_transform(laplacian(st.temperature));
  PhysicalField lame_v = inverse_transform(lame_operator(st.velocity, dp.mu_tilde));
  PhysicalField grad_k3 = inverse_transform(gradient(forward_transform(cf.pressure_integral)));

  // velocity gradient tensor, row-major (component i, axis j)
  std::vector<PhysicalField> dvel(d);
  {
    const std::size_t vp = npts;
    for (int ax = 0; ax < d; ++ax) {
      SpectralField dax = apply_multiplier(
          st.velocity, [ax](const std::array<double, 3>& xi) { return cplx(0.0, xi[ax]); });
      dvel[ax] = inverse_transform(dax);  // dvel[ax].at(i, x) = d v_i / d x_ax
      (void)vp;
    }
  }

  // f = -div(a v): product in physical space, divergence spectral
  PhysicalField a_v(g, d);
  for (int c = 0; c < d; ++c)
    for (std::size_t i = 0; i < npts; ++i) a_v.at(c, i) = a.values[i] * vel.at(c, i);
  SpectralField mass = divergence(forward_transform(a_v));
  mass *= -1.0;
  dealias(mass);

  // g = -v.grad v - I(a) A~v - K1(a) grad a - K2(a) grad th - th grad K3(a)
  PhysicalField gphys(g, d);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < npts; ++i) {
    for (int c = 0; c < d; ++c) {
      double adv = 0.0;
      for (int ax = 0; ax < d; ++ax) adv += vel.at(ax, i) * dvel[ax].at(c, i);
      gphys.at(c, i) = -adv - cf.density_ratio.values[i] * lame_v.at(c, i) -
                       cf.pressure_density.values[i] * grad_a.at(c, i) -
                       cf.pressure_temp.values[i] * grad_th.at(c, i) -
                       th.values[i] * grad_k3.at(c, i);
    }
  }
  SpectralField momentum = forward_transform(gphys);
  dealias(momentum);

  // k = -v.grad th - beta I(a) Lap th + Q(grad v, grad v)/(1+a)
  //     - (K~1(a) + K~2(a) th) div v
  PhysicalField kphys(g, 1);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < npts; ++i) {
    double gv[9];
    double adv = 0.0, divv = 0.0;
    for (int ax = 0; ax < d; ++ax) {
      adv += vel.at(ax, i) * grad_th.at(ax, i);
      divv += dvel[ax].at(ax, i);
      for (int c = 0; c < d; ++c) gv[static_cast<std::size_t>(c) * d + ax] = dvel[ax].at(c, i);
    }
    const double q = tab.dissipation_form(gv, d);
    kphys.values[i] = -adv - dp.beta * cf.density_ratio.values[i] * lap_th.values[i] +
                      q / (1.0 + a.values[i]) -
                      (cf.div_coupling.values[i] + cf.div_coupling_temp.values[i] * th.values[i]) * divv;
  }
  SpectralField heat = forward_transform(kphys);
  dealias(heat);

  return {std::move(mass), std::move(momentum), std::move(heat)};
}

// Effective velocity w = grad (-Lap)^{-1} (a - div v); curl-free, zero mean.
inline SpectralField effective_velocity(const State& st) {
  st.require_consistent();
  const GridSpec& g = st.grid();
  const int d = g.d;
  SpectralField w(g, d);
  const double s = g.mode_step();
  const std::size_t npts = g.points();
  for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
    const double xi[3] = {s * k0, s * k1, s * k2};
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (r2 == 0.0) return;  // zero mode stays zero
    cplx divv(0.0, 0.0);
    for (int c = 0; c < d; ++c) divv += cplx(0.0, xi[c]) * st.velocity.coeffs[c * npts + flat];
    const cplx src = st.density.coeffs[flat] - divv;
    for (int c = 0; c < d; ++c) w.coeffs[c * npts + flat] = cplx(0.0, xi[c] / r2) * src;
  });
  return w;
}

// v = w - grad (-Lap)^{-1} a + P v: inverts effective_velocity given the
// density and the solenoidal part.
inline SpectralField helmholtz_reconstruct(const SpectralField& w, const SpectralField& a,
                                           const SpectralField& solenoidal) {
  if (!(w.grid == a.grid) || !(w.grid == solenoidal.grid))
    throw std::invalid_argument("helmholtz_reconstruct: grid mismatch");
  if (w.comps != w.grid.d || solenoidal.comps != w.grid.d || a.comps != 1)
    throw std::invalid_argument("helmholtz_reconstruct: bad component counts");
  const GridSpec& g = w.grid;
  const int d = g.d;
  SpectralField v = w;
  const double s = g.mode_step();
  const std::size_t npts = g.points();
  for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
    const double xi[3] = {s * k0, s * k1, s * k2};
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    for (int c = 0; c < d; ++c) {
      cplx acc = v.coeffs[c * npts + flat] + solenoidal.coeffs[c * npts + flat];
      if (r2 != 0.0) acc -= cplx(0.0, xi[c] / r2) * a.coeffs[flat];
      v.coeffs[c * npts + flat] = acc;
    }
  });
  return v;
}

}  // namespace nsflab
