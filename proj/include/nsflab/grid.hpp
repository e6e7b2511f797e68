#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace nsflab {

inline constexpr double kPi = 3.14159265358979323846;

// Uniform periodic grid on [0, L)^d with n points per axis.
// Fourier modes are xi = 2*pi*k/L with k in {-n/2, ..., n/2-1} per axis
// (standard FFT index i maps to k = i for i < n/2, i - n otherwise).
struct GridSpec {
  int d = 3;
  int n = 16;
  double box_len = 2.0 * kPi;

  void validate() const {
    if (d != 2 && d != 3) throw std::invalid_argument("GridSpec: d must be 2 or 3");
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("GridSpec: n must be even and >= 8");
    if (!(box_len > 0.0)) throw std::invalid_argument("GridSpec: box_len must be > 0");
  }

  std::size_t points() const {
    std::size_t p = 1;
    for (int i = 0; i < d; ++i) p *= static_cast<std::size_t>(n);
    return p;
  }

  double spacing() const { return box_len / n; }              // h
  double cell_measure() const { return std::pow(spacing(), d); }
  double volume() const { return std::pow(box_len, d); }
  double mode_step() const { return 2.0 * kPi / box_len; }    // smallest nonzero |xi|
  double nyquist() const { return kPi * n / box_len; }        // per-axis |xi| cap
  double max_mode() const { return nyquist() * std::sqrt(double(d)); }

  int signed_index(int i) const { return i < n / 2 ? i : i - n; }

  // Per-axis signed integer modes of a flat row-major index (last axis fastest).
  std::array<int, 3> signed_modes(std::size_t flat) const {
    std::array<int, 3> k{0, 0, 0};
    for (int ax = d - 1; ax >= 0; --ax) {
      k[ax] = signed_index(static_cast<int>(flat % n));
      flat /= static_cast<std::size_t>(n);
    }
    return k;
  }

  std::array<double, 3> wavevector(std::size_t flat) const {
    const auto k = signed_modes(flat);
    const double s = mode_step();
    return {s * k[0], s * k[1], s * k[2]};
  }

  bool operator==(const GridSpec&) const = default;
};

// Visits every flat index together with its signed integer modes.
// fn(flat, k0, k1, k2); k2 is 0 in dimension 2.
template <class Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
  const int n = g.n;
  if (g.d == 2) {
    std::size_t flat = 0;
    for (int i0 = 0; i0 < n; ++i0) {
      const int k0 = g.signed_index(i0);
      for (int i1 = 0; i1 < n; ++i1, ++flat) fn(flat, k0, g.signed_index(i1), 0);
    }
  } else {
    std::size_t flat = 0;
    for (int i0 = 0; i0 < n; ++i0) {
      const int k0 = g.signed_index(i0);
      for (int i1 = 0; i1 < n; ++i1) {
        const int k1 = g.signed_index(i1);
        for (int i2 = 0; i2 < n; ++i2, ++flat) fn(flat, k0, k1, g.signed_index(i2));
      }
    }
  }
}

}  // namespace nsflab
