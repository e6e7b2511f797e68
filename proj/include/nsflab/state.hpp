#pragma once

#include <stdexcept>

#include "nsflab/field.hpp"

namespace nsflab {

// Spectral state (a, v, theta): density, velocity and temperature
// perturbations around the constant equilibrium, on a common grid.
struct State {
  SpectralField density;      // scalar
  SpectralField velocity;     // d components
  SpectralField temperature;  // scalar
  double time = 0.0;

  State() = default;
  explicit State(const GridSpec& g, double t = 0.0)
      : density(g, 1), velocity(g, g.d), temperature(g, 1), time(t) {}

  const GridSpec& grid() const { return density.grid; }

  void require_consistent() const {
    if (!(density.grid == velocity.grid) || !(density.grid == temperature.grid))
      throw std::invalid_argument("State: fields live on different grids");
    if (velocity.comps != density.grid.d || density.comps != 1 || temperature.comps != 1)
      throw std::invalid_argument("State: bad component counts");
  }

  State& operator+=(const State& o) {
    density += o.density;
    velocity += o.velocity;
    temperature += o.temperature;
    return *this;
  }
  State& operator-=(const State& o) {
    density -= o.density;
    velocity -= o.velocity;
    temperature -= o.temperature;
    return *this;
  }
  State& operator*=(double s) {
    density *= s;
    velocity *= s;
    temperature *= s;
    return *this;
  }
  State& axpy(double s, const State& o) {
    density.axpy(s, o.density);
    velocity.axpy(s, o.velocity);
    temperature.axpy(s, o.temperature);
    return *this;
  }

  bool finite() const { return density.finite() && velocity.finite() && temperature.finite(); }
};

inline State operator-(State a, const State& b) { return a -= b; }
inline State operator+(State a, const State& b) { return a += b; }

}  // namespace nsflab
