#pragma once

#include <cmath>

#include "nsflab/grid.hpp"

namespace nsflab {

// Smooth radial Littlewood-Paley cutoff.
//
//   psi(r) = 1 on [0, 3/4],  0 on [4/3, inf),
//   psi(r) = S((4/3 - r)/(4/3 - 3/4)) in between,
//   S(x)   = E(x)/(E(x) + E(1-x)),  E(x) = exp(-1/x).
//
// band(r, j) evaluates phi(2^-j xi) = chi(2^-(j+1) xi) - chi(2^-j xi) at
// r = |xi| through ldexp so that adjacent blocks share bit-identical psi
// evaluations and the telescoping sum over j collapses exactly.
struct CutoffProfile {
  static constexpr double inner = 0.75;
  static constexpr double outer = 4.0 / 3.0;

  static double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

  static double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = bump(x);
    const double b = bump(1.0 - x);
    return a / (a + b);
  }

  static double psi(double r) {
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    return smooth_step((outer - r) / (outer - inner));
  }

  static double chi(double r) { return psi(r); }

  // phi(xi), supported in {3/4 <= |xi| <= 8/3}
  static double band(double r) { return psi(0.5 * r) - psi(r); }

  // phi(2^-j xi) at r = |xi|
  static double band(double r, int j) { return psi(std::ldexp(r, -j - 1)) - psi(std::ldexp(r, -j)); }
};

// Dyadic block indices representable on the grid: every nonzero grid mode xi
// satisfies sum_{j_min <= j <= j_max} phi(2^-j xi) = 1 exactly. The box
// imposes a frequency floor 2*pi/L; blocks below j_min vanish identically on
// the grid and blocks above j_max exceed the Nyquist corner.
struct BlockRange {
  int j_min;
  int j_max;
  int count() const { return j_max - j_min + 1; }
  bool contains(int j) const { return j >= j_min && j <= j_max; }
};

inline BlockRange block_range(const GridSpec& g) {
  // chi(2^-j_min xi_min) = 0  <=>  2^-j_min * (2 pi / L) >= 4/3
  const int j_min = static_cast<int>(std::floor(std::log2(0.75 * g.mode_step())));
  // chi(2^-(j_max+1) xi_max) = 1  <=>  2^-(j_max+1) * |xi|_max <= 3/4
  const int j_max = static_cast<int>(std::ceil(std::log2(g.max_mode() / 0.75))) - 1;
  return {j_min, j_max};
}

}  // namespace nsflab
