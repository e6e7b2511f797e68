#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nsflab/grid.hpp"

namespace nsflab {

using cplx = std::complex<double>;

// Real samples on the grid, component-major: values[c*points + i].
struct PhysicalField {
  GridSpec grid;
  int comps = 1;
  std::vector<double> values;

  PhysicalField() = default;
  PhysicalField(const GridSpec& g, int c)
      : grid(g), comps(c), values(g.points() * static_cast<std::size_t>(c), 0.0) {
    grid.validate();
    if (c < 1) throw std::invalid_argument("PhysicalField: comps must be >= 1");
  }

  double& at(int c, std::size_t i) { return values[static_cast<std::size_t>(c) * grid.points() + i]; }
  double at(int c, std::size_t i) const { return values[static_cast<std::size_t>(c) * grid.points() + i]; }
  const double* comp(int c) const { return values.data() + static_cast<std::size_t>(c) * grid.points(); }
  double* comp(int c) { return values.data() + static_cast<std::size_t>(c) * grid.points(); }

  bool finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

// Complex Fourier coefficients, component-major, FFT mode order (row-major).
struct SpectralField {
  GridSpec grid;
  int comps = 1;
  std::vector<cplx> coeffs;

  SpectralField() = default;
  SpectralField(const GridSpec& g, int c)
      : grid(g), comps(c), coeffs(g.points() * static_cast<std::size_t>(c), cplx(0.0, 0.0)) {
    grid.validate();
    if (c < 1) throw std::invalid_argument("SpectralField: comps must be >= 1");
  }

  cplx& at(int c, std::size_t i) { return coeffs[static_cast<std::size_t>(c) * grid.points() + i]; }
  cplx at(int c, std::size_t i) const { return coeffs[static_cast<std::size_t>(c) * grid.points() + i]; }
  const cplx* comp(int c) const { return coeffs.data() + static_cast<std::size_t>(c) * grid.points(); }
  cplx* comp(int c) { return coeffs.data() + static_cast<std::size_t>(c) * grid.points(); }

  bool finite() const {
    for (const cplx& v : coeffs)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  SpectralField& operator*=(double s) {
    for (auto& v : coeffs) v *= s;
    return *this;
  }
  // this += s * o
  SpectralField& axpy(double s, const SpectralField& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += s * o.coeffs[i];
    return *this;
  }

  void require_same_shape(const SpectralField& o) const {
    if (!(grid == o.grid) || comps != o.comps)
      throw std::invalid_argument("SpectralField: shape mismatch");
  }
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
inline SpectralField operator*(double s, SpectralField a) { return a *= s; }

// Largest deviation from conjugate symmetry coeffs(-k) = conj(coeffs(k)).
inline double conjugate_symmetry_defect(const SpectralField& u) {
  const int n = u.grid.n;
  double worst = 0.0;
  for (int c = 0; c < u.comps; ++c) {
    for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
      auto wrap = [n](int k) { return ((-k) % n + n) % n; };
      std::size_t neg;
      if (u.grid.d == 2)
        neg = static_cast<std::size_t>(wrap(k0)) * n + wrap(k1);
      else
        neg = (static_cast<std::size_t>(wrap(k0)) * n + wrap(k1)) * n + wrap(k2);
      const cplx diff = u.at(c, flat) - std::conj(u.at(c, neg));
      worst = std::max(worst, std::abs(diff));
    });
  }
  return worst;
}

}  // namespace nsflab
