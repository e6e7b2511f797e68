#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nsflab {

// Parameters of the decay functionals. The admissible window couples the
// Lebesgue exponent p and the low-frequency regularity index s1:
// 2 <= p < d, p <= 2d/(d-2), max(0, 2 - d/2) <= s1 <= s0 = 2d/p - d/2.
struct DecayParams {
  int dim = 3;
  double s1 = 1.5;
  double p = 2.0;
  double eps = 0.01;
  int j0 = 0;
  std::vector<double> s_grid;  // empty = default grid

  double s0() const { return 2.0 * dim / p - 0.5 * dim; }
  double alpha() const { return s1 + 0.5 * dim + 0.5 - eps; }

  void validate() const {
    const double d = dim;
    if (dim != 2 && dim != 3) throw std::invalid_argument("DecayParams: dim must be 2 or 3");
    if (!(p >= 2.0) || !(p < d) || !(p <= 2.0 * d / (d - 2.0)))
      throw std::invalid_argument("DecayParams: need 2 <= p < d and p <= 2d/(d-2)");
    if (!(s1 >= std::max(0.0, 2.0 - 0.5 * d) - 1e-12) || !(s1 <= s0() + 1e-12))
      throw std::invalid_argument("DecayParams: s1 outside [max(0, 2 - d/2), s0]");
    if (!(eps >= 0.0)) throw std::invalid_argument("DecayParams: eps must be >= 0");
  }

  // Default s grid: {eps - s1, 0, 1, d/2, d/2 + 1} clipped to (-s1, d/2 + 1].
  std::vector<double> resolved_s_grid() const {
    if (!s_grid.empty()) return s_grid;
    std::vector<double> out;
    const double lo = eps - s1, hi = 0.5 * dim + 1.0;
    for (double s : {lo, 0.0, 1.0, 0.5 * dim, hi})
      if (s >= lo - 1e-12 && s <= hi + 1e-12 &&
          (out.empty() || std::abs(out.back() - s) > 1e-12))
        out.push_back(s);
    return out;
  }
};

struct InitialDataSpec {
  enum class Kind { GaussianBump, PowerProfile };
  Kind kind = Kind::GaussianBump;
  double amplitude = 1e-2;  // spectral amplitude
  double width = 1.0;       // Gaussian bump width (physical)
  unsigned long long seed = 2024ull;  // phase seed for the power profile

  void validate() const {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("InitialDataSpec: amplitude must be >= 0");
    if (!(width > 0.0)) throw std::invalid_argument("InitialDataSpec: width must be > 0");
  }
};

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int samples = 0;
};

// Least-squares slope of log(value) against log<t>, <t> = sqrt(1 + t^2).
inline DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value,
                          double window_lo, double window_hi) {
  if (t.size() != value.size()) throw std::invalid_argument("fit_decay: length mismatch");
  if (!(window_lo < window_hi)) throw std::invalid_argument("fit_decay: empty window");
  DecayFit fit;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window_lo || t[i] > window_hi) continue;
    if (!(value[i] > 0.0))
      throw std::invalid_argument("fit_decay: nonpositive value inside the fit window");
    x.push_back(0.5 * std::log1p(t[i] * t[i]));  // log sqrt(1 + t^2)
    y.push_back(std::log(value[i]));
  }
  fit.samples = static_cast<int>(x.size());
  if (fit.samples < 6) throw std::invalid_argument("fit_decay: need at least 6 samples in window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < fit.samples; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double n = fit.samples;
  const double denom = n * sxx - sx * sx;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.exponent * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ymean = sy / n;
  for (int i = 0; i < fit.samples; ++i) {
    const double pred = fit.intercept + fit.exponent * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ymean) * (y[i] - ymean);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace nsflab
