#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "nsflab/field.hpp"

namespace nsflab {

// Mode-wise scalar Fourier multiplier. The symbol is called with the
// wavevector xi (including xi = 0, whose value the symbol must define);
// a non-finite value at a nonzero grid mode is an error.
template <class Symbol>
SpectralField apply_multiplier(const SpectralField& u, Symbol&& m) {
  SpectralField out(u.grid, u.comps);
  const double s = u.grid.mode_step();
  const std::size_t npts = u.grid.points();
  for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
    const std::array<double, 3> xi{s * k0, s * k1, s * k2};
    const cplx mv = m(xi);
    if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag())) {
      if (k0 != 0 || k1 != 0 || k2 != 0)
        throw std::domain_error("apply_multiplier: symbol singular at a nonzero grid mode");
      throw std::domain_error("apply_multiplier: symbol value at xi = 0 must be supplied finite");
    }
    for (int c = 0; c < u.comps; ++c) out.coeffs[c * npts + flat] = mv * u.coeffs[c * npts + flat];
  });
  return out;
}

// Mode-wise matrix multiplier acting across the d components of a vector
// field: out_i = sum_j M_ij(xi) u_j.
template <class MatrixSymbol>
SpectralField apply_matrix_multiplier(const SpectralField& u, MatrixSymbol&& m) {
  if (u.comps != u.grid.d)
    throw std::invalid_argument("apply_matrix_multiplier: vector field required");
  const int d = u.grid.d;
  SpectralField out(u.grid, d);
  const double s = u.grid.mode_step();
  const std::size_t npts = u.grid.points();
  for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
    const std::array<double, 3> xi{s * k0, s * k1, s * k2};
    const auto M = m(xi);  // row-major d x d of cplx
    for (int i = 0; i < d; ++i) {
      cplx acc(0.0, 0.0);
      for (int j = 0; j < d; ++j) {
        const cplx mv = M[i * d + j];
        if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
          throw std::domain_error("apply_matrix_multiplier: singular symbol entry");
        acc += mv * u.coeffs[j * npts + flat];
      }
      out.coeffs[i * npts + flat] = acc;
    }
  });
  return out;
}

// Lambda^s = |D|^s. Homogeneous convention at the zero mode: kept for s = 0,
// set to 0 otherwise (homogeneous norms ignore the mean).
inline SpectralField lambda_power(const SpectralField& u, double sexp) {
  return apply_multiplier(u, [sexp](const std::array<double, 3>& xi) {
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (r2 == 0.0) return cplx(sexp == 0.0 ? 1.0 : 0.0, 0.0);
    return cplx(std::pow(r2, 0.5 * sexp), 0.0);
  });
}

inline SpectralField partial_derivative(const SpectralField& u, int axis) {
  if (axis < 0 || axis >= u.grid.d) throw std::invalid_argument("partial_derivative: bad axis");
  return apply_multiplier(u, [axis](const std::array<double, 3>& xi) { return cplx(0.0, xi[axis]); });
}

inline SpectralField laplacian(const SpectralField& u) {
  return apply_multiplier(u, [](const std::array<double, 3>& xi) {
    return cplx(-(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]), 0.0);
  });
}

// (-Delta)^{-1}, zero mode -> 0.
inline SpectralField inv_neg_laplacian(const SpectralField& u) {
  return apply_multiplier(u, [](const std::array<double, 3>& xi) {
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    return r2 == 0.0 ? cplx(0.0, 0.0) : cplx(1.0 / r2, 0.0);
  });
}

inline SpectralField gradient(const SpectralField& u) {
  if (u.comps != 1) throw std::invalid_argument("gradient: scalar field required");
  const int d = u.grid.d;
  SpectralField out(u.grid, d);
  const double s = u.grid.mode_step();
  const std::size_t npts = u.grid.points();
  for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
    const cplx v = u.coeffs[flat];
    const int k[3] = {k0, k1, k2};
    for (int i = 0; i < d; ++i) out.coeffs[i * npts + flat] = cplx(0.0, s * k[i]) * v;
  });
  return out;
}

inline SpectralField divergence(const SpectralField& u) {
  if (u.comps != u.grid.d) throw std::invalid_argument("divergence: vector field required");
  const int d = u.grid.d;
  SpectralField out(u.grid, 1);
  const double s = u.grid.mode_step();
  const std::size_t npts = u.grid.points();
  for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
    const int k[3] = {k0, k1, k2};
    cplx acc(0.0, 0.0);
    for (int i = 0; i < d; ++i) acc += cplx(0.0, s * k[i]) * u.coeffs[i * npts + flat];
    out.coeffs[flat] = acc;
  });
  return out;
}

// Leray projection onto divergence-free fields: u -> (I - xi xi^T/|xi|^2) u
// mode-wise; the zero mode passes through unchanged.
inline SpectralField leray_project(const SpectralField& u) {
  if (u.comps != u.grid.d) throw std::invalid_argument("leray_project: vector field required");
  const int d = u.grid.d;
  SpectralField out(u.grid, d);
  const double s = u.grid.mode_step();
  const std::size_t npts = u.grid.points();
  for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
    const double xi[3] = {s * k0, s * k1, s * k2};
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (r2 == 0.0) {
      for (int i = 0; i < d; ++i) out.coeffs[i * npts + flat] = u.coeffs[i * npts + flat];
      return;
    }
    cplx dot(0.0, 0.0);
    for (int i = 0; i < d; ++i) dot += xi[i] * u.coeffs[i * npts + flat];
    dot /= r2;
    for (int i = 0; i < d; ++i) out.coeffs[i * npts + flat] = u.coeffs[i * npts + flat] - xi[i] * dot;
  });
  return out;
}

}  // namespace nsflab
