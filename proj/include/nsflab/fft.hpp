#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "nsflab/field.hpp"

namespace nsflab {
namespace detail {

// Process-wide cache of FFTW plans keyed by (d, n). Plans are built with
// FFTW_ESTIMATE so identical inputs always produce identical outputs.
// Each entry owns its buffers; execution is serialized by a mutex.
class FftEngine {
 public:
  static FftEngine& instance() {
    static FftEngine e;
    return e;
  }

  // out = sum_x in(x) exp(-i xi_k . x_m) (unnormalized DFT)
  void forward(const GridSpec& g, const cplx* in, cplx* out) { run(g, in, out, FFTW_FORWARD); }
  // out = sum_k in(k) exp(+i xi_k . x_m) (unnormalized inverse sum)
  void backward(const GridSpec& g, const cplx* in, cplx* out) { run(g, in, out, FFTW_BACKWARD); }

  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

 private:
  FftEngine() = default;

  struct Entry {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t npts = 0;
  };

  void run(const GridSpec& g, const cplx* in, cplx* out, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    Entry& e = entry(g);
    for (std::size_t i = 0; i < e.npts; ++i) {
      e.in[i][0] = in[i].real();
      e.in[i][1] = in[i].imag();
    }
    fftw_execute(sign == FFTW_FORWARD ? e.fwd : e.bwd);
    for (std::size_t i = 0; i < e.npts; ++i) out[i] = cplx(e.out[i][0], e.out[i][1]);
  }

  Entry& entry(const GridSpec& g) {
    const auto key = std::make_pair(g.d, g.n);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Entry e;
    e.npts = g.points();
    e.in = fftw_alloc_complex(e.npts);
    e.out = fftw_alloc_complex(e.npts);
    if (!e.in || !e.out) throw std::runtime_error("FftEngine: allocation failed");
    if (g.d == 2) {
      e.fwd = fftw_plan_dft_2d(g.n, g.n, e.in, e.out, FFTW_FORWARD, FFTW_ESTIMATE);
      e.bwd = fftw_plan_dft_2d(g.n, g.n, e.in, e.out, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
      e.fwd = fftw_plan_dft_3d(g.n, g.n, g.n, e.in, e.out, FFTW_FORWARD, FFTW_ESTIMATE);
      e.bwd = fftw_plan_dft_3d(g.n, g.n, g.n, e.in, e.out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    return cache_.emplace(key, e).first->second;
  }

  std::map<std::pair<int, int>, Entry> cache_;
  std::mutex mu_;
};

}  // namespace detail

// Continuum-calibrated forward transform: coeffs(k) = h^d sum_x f(x) exp(-i xi.x).
inline SpectralField forward_transform(const PhysicalField& f) {
  if (!f.finite()) throw std::invalid_argument("forward_transform: non-finite input");
  SpectralField out(f.grid, f.comps);
  const std::size_t npts = f.grid.points();
  const double scale = f.grid.cell_measure();
  std::vector<cplx> buf(npts);
  for (int c = 0; c < f.comps; ++c) {
    for (std::size_t i = 0; i < npts; ++i) buf[i] = cplx(f.at(c, i), 0.0);
    detail::FftEngine::instance().forward(f.grid, buf.data(), out.comp(c));
    for (std::size_t i = 0; i < npts; ++i) out.at(c, i) *= scale;
  }
  return out;
}

// Inverse of forward_transform: f(x) = L^{-d} sum_k coeffs(k) exp(+i xi.x).
// The imaginary residual (roundoff for conjugate-symmetric data) is dropped.
inline PhysicalField inverse_transform(const SpectralField& u) {
  if (!u.finite()) throw std::invalid_argument("inverse_transform: non-finite input");
  PhysicalField out(u.grid, u.comps);
  const std::size_t npts = u.grid.points();
  const double scale = 1.0 / u.grid.volume();
  std::vector<cplx> buf(npts);
  for (int c = 0; c < u.comps; ++c) {
    detail::FftEngine::instance().backward(u.grid, u.comp(c), buf.data());
    for (std::size_t i = 0; i < npts; ++i) out.at(c, i) = buf[i].real() * scale;
  }
  return out;
}

}  // namespace nsflab
