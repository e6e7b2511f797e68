#pragma once

#include <utility>

#include "nsflab/cutoff.hpp"
#include "nsflab/multiplier.hpp"

namespace nsflab {

// Homogeneous dyadic block: mode-wise multiplication by phi(2^-j xi).
// Block indices outside block_range(grid) give the zero field.
inline SpectralField dyadic_block(const SpectralField& u, int j) {
  return apply_multiplier(u, [j](const std::array<double, 3>& xi) {
    const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    return cplx(CutoffProfile::band(r, j), 0.0);
  });
}

// Low-frequency cut-off S_{j0} = chi(2^-j0 D); keeps the zero mode.
inline SpectralField low_cut(const SpectralField& u, int j0) {
  return apply_multiplier(u, [j0](const std::array<double, 3>& xi) {
    const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    return cplx(CutoffProfile::psi(std::ldexp(r, -j0)), 0.0);
  });
}

// (low, high) with low = S_{j0} u and high = u - low; low + high = u exactly.
inline std::pair<SpectralField, SpectralField> low_high_split(const SpectralField& u, int j0) {
  SpectralField low = low_cut(u, j0);
  SpectralField high = u;
  high -= low;
  return {std::move(low), std::move(high)};
}

}  // namespace nsflab
