#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nsflab/dyadic.hpp"
#include "nsflab/fft.hpp"

namespace nsflab {

struct BesovParams {
  double s = 0.0;
  double p = 2.0;                                    // Lebesgue exponent, inf allowed
  double r = 1.0;                                    // summation exponent, inf allowed
  static constexpr double inf = std::numeric_limits<double>::infinity();

  void validate() const {
    if (!(p >= 1.0) || !(r >= 1.0)) throw std::invalid_argument("BesovParams: p, r must be >= 1");
  }
};

// L^p norm with the grid quadrature (h^d sum |f|^p)^{1/p}; the pointwise
// magnitude of a multi-component field is Euclidean. p = inf is the grid max.
inline double lp_norm(const PhysicalField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const std::size_t npts = f.grid.points();
  auto mag2 = [&](std::size_t i) {
    double m = 0.0;
    for (int c = 0; c < f.comps; ++c) {
      const double v = f.at(c, i);
      m += v * v;
    }
    return m;
  };
  if (std::isinf(p)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < npts; ++i) worst = std::max(worst, mag2(i));
    return std::sqrt(worst);
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < npts; ++i) acc += mag2(i);
  } else {
    for (std::size_t i = 0; i < npts; ++i) acc += std::pow(mag2(i), 0.5 * p);
  }
  return std::pow(f.grid.cell_measure() * acc, 1.0 / p);
}

// ||Delta_j u||_{L^2} straight from Plancherel; avoids the inverse transform.
inline double block_l2_norm(const SpectralField& u, int j) {
  const double s = u.grid.mode_step();
  const std::size_t npts = u.grid.points();
  double acc = 0.0;
  for_each_mode(u.grid, [&](std::size_t flat, int k0, int k1, int k2) {
    const double r = s * std::sqrt(double(k0) * k0 + double(k1) * k1 + double(k2) * k2);
    const double w = CutoffProfile::band(r, j);
    if (w == 0.0) return;
    double m2 = 0.0;
    for (int c = 0; c < u.comps; ++c) m2 += std::norm(u.coeffs[c * npts + flat]);
    acc += w * w * m2;
  });
  return std::sqrt(acc / u.grid.volume());
}

inline double block_lp_norm(const SpectralField& u, int j, double p) {
  if (p == 2.0) return block_l2_norm(u, j);
  return lp_norm(inverse_transform(dyadic_block(u, j)), p);
}

namespace detail {
inline double lr_accumulate(const std::vector<double>& terms, double r) {
  if (terms.empty()) return 0.0;
  if (std::isinf(r)) return *std::max_element(terms.begin(), terms.end());
  if (r == 1.0) {
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
  }
  double acc = 0.0;
  for (double t : terms) acc += std::pow(t, r);
  return std::pow(acc, 1.0 / r);
}
}  // namespace detail

// Frequency restriction of a block sum. Low keeps j <= j0; High keeps
// j >= j0 - 1 (the one-block overlap is deliberate).
struct SplitConfig {
  int j0 = 0;
};
enum class BlockSide { Full, Low, High };

inline bool block_selected(int j, BlockSide side, int j0) {
  switch (side) {
    case BlockSide::Low: return j <= j0;
    case BlockSide::High: return j >= j0 - 1;
    default: return true;
  }
}

// Homogeneous Besov norm over the grid-representable blocks. The zero mode
// never contributes (phi vanishes at 0), so means are ignored.
inline double besov_norm(const SpectralField& u, const BesovParams& bp,
                         BlockSide side = BlockSide::Full, int j0 = 0) {
  bp.validate();
  const BlockRange jr = block_range(u.grid);
  std::vector<double> terms;
  terms.reserve(jr.count());
  for (int j = jr.j_min; j <= jr.j_max; ++j) {
    if (!block_selected(j, side, j0)) continue;
    terms.push_back(std::pow(2.0, j * bp.s) * block_lp_norm(u, j, bp.p));
  }
  return detail::lr_accumulate(terms, bp.r);
}

inline double restricted_besov_norm(const SpectralField& u, const BesovParams& bp, BlockSide side,
                                    int j0) {
  return besov_norm(u, bp, side, j0);
}

// Per-block, per-time L^p norms of named state components; the raw material
// for every time-weighted functional. Immutable after recording.
class BlockNormRecord {
 public:
  BlockNormRecord() = default;
  BlockNormRecord(int j_min, int j_max, std::vector<std::string> components, std::vector<double> ps)
      : j_min_(j_min), j_max_(j_max), components_(std::move(components)), ps_(std::move(ps)) {}

  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int block_count() const { return j_max_ - j_min_ + 1; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::string>& components() const { return components_; }
  const std::vector<double>& ps() const { return ps_; }

  bool has(const std::string& comp, double p) const {
    return data_.count(key(comp, p)) > 0;
  }

  // values laid out [time][j]
  void append_time(double t, const std::string& comp, double p, const std::vector<double>& row) {
    if (static_cast<int>(row.size()) != block_count())
      throw std::invalid_argument("BlockNormRecord: row size mismatch");
    if (!times_.empty() && !time_known_(t) && t <= times_.back())
      throw std::invalid_argument("BlockNormRecord: times must be strictly increasing");
    if (!time_known_(t)) times_.push_back(t);
    auto& v = data_[key(comp, p)];
    v.insert(v.end(), row.begin(), row.end());
  }

  double value(const std::string& comp, double p, std::size_t it, int j) const {
    const auto& v = series(comp, p);
    return v[it * block_count() + static_cast<std::size_t>(j - j_min_)];
  }

  const std::vector<double>& series(const std::string& comp, double p) const {
    auto it = data_.find(key(comp, p));
    if (it == data_.end())
      throw std::out_of_range("BlockNormRecord: missing component '" + comp + "' at p=" +
                              std::to_string(p));
    return it->second;
  }

  // CSV with exact header t,component,p,j,value
  void write_csv(std::ostream& os, const std::function<std::string(double)>& fmt) const {
    os << "t,component,p,j,value\n";
    for (std::size_t it = 0; it < times_.size(); ++it)
      for (const auto& comp : components_)
        for (double p : ps_) {
          if (!has(comp, p)) continue;
          for (int j = j_min_; j <= j_max_; ++j)
            os << fmt(times_[it]) << ',' << comp << ',' << fmt(p) << ',' << j << ','
               << fmt(value(comp, p, it, j)) << '\n';
        }
  }

  static BlockNormRecord read_csv(std::istream& is);

 private:
  bool time_known_(double t) const { return !times_.empty() && times_.back() == t; }
  static std::string key(const std::string& comp, double p) {
    std::ostringstream os;
    os << comp << '@' << p;
    return os.str();
  }

  int j_min_ = 0, j_max_ = -1;
  std::vector<double> times_;
  std::vector<std::string> components_;
  std::vector<double> ps_;
  std::map<std::string, std::vector<double>> data_;
};

// sum_j 2^{js} sup_t weight(t) * rec(j, t)   (Chemin-Lerner style, rho = inf)
inline double tilde_sup_norm(const BlockNormRecord& rec, const std::string& comp, double s, double p,
                             const std::function<double(double)>& weight,
                             BlockSide side = BlockSide::Full, int j0 = 0,
                             double t_max = std::numeric_limits<double>::infinity()) {
  const auto& ts = rec.times();
  double total = 0.0;
  for (int j = rec.j_min(); j <= rec.j_max(); ++j) {
    if (!block_selected(j, side, j0)) continue;
    double sup = 0.0;
    for (std::size_t it = 0; it < ts.size(); ++it) {
      if (ts[it] > t_max) break;
      sup = std::max(sup, weight(ts[it]) * rec.value(comp, p, it, j));
    }
    total += std::pow(2.0, j * s) * sup;
  }
  return total;
}

// sum_j 2^{js} int_0^T rec(j, t) dt by the trapezoid rule on recorded times.
inline double time_l1_norm(const BlockNormRecord& rec, const std::string& comp, double s, double p,
                           BlockSide side = BlockSide::Full, int j0 = 0,
                           double t_max = std::numeric_limits<double>::infinity()) {
  const auto& ts = rec.times();
  std::size_t m = 0;
  while (m < ts.size() && ts[m] <= t_max) ++m;
  if (m < 2) throw std::invalid_argument("time_l1_norm: need at least 2 samples");
  double total = 0.0;
  for (int j = rec.j_min(); j <= rec.j_max(); ++j) {
    if (!block_selected(j, side, j0)) continue;
    double integ = 0.0;
    for (std::size_t it = 0; it + 1 < m; ++it)
      integ += 0.5 * (ts[it + 1] - ts[it]) *
               (rec.value(comp, p, it, j) + rec.value(comp, p, it + 1, j));
    total += std::pow(2.0, j * s) * integ;
  }
  return total;
}

inline BlockNormRecord BlockNormRecord::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,component,p,j,value", 0) != 0)
    throw std::runtime_error("BlockNormRecord: bad CSV header");
  struct Row {
    double t;
    std::string comp;
    double p;
    int j;
    double v;
  };
  std::vector<Row> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Row r;
    std::istringstream ls(line);
    std::string tok;
    std::getline(ls, tok, ',');
    r.t = std::stod(tok);
    std::getline(ls, r.comp, ',');
    std::getline(ls, tok, ',');
    r.p = std::stod(tok);
    std::getline(ls, tok, ',');
    r.j = std::stoi(tok);
    std::getline(ls, tok, ',');
    r.v = std::stod(tok);
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error("BlockNormRecord: empty CSV");
  int jmin = rows.front().j, jmax = rows.front().j;
  std::vector<std::string> comps;
  std::vector<double> ps;
  for (const auto& r : rows) {
    jmin = std::min(jmin, r.j);
    jmax = std::max(jmax, r.j);
    if (std::find(comps.begin(), comps.end(), r.comp) == comps.end()) comps.push_back(r.comp);
    if (std::find(ps.begin(), ps.end(), r.p) == ps.end()) ps.push_back(r.p);
  }
  BlockNormRecord rec(jmin, jmax, comps, ps);
  // rows arrive grouped by time in write order; rebuild rows per (t, comp, p)
  std::map<std::string, std::vector<double>> pending;
  double cur_t = rows.front().t;
  auto flush = [&](double t) {
    for (const auto& comp : rec.components())
      for (double p : rec.ps()) {
        auto it = pending.find(key(comp, p));
        if (it != pending.end()) rec.append_time(t, comp, p, it->second);
      }
    pending.clear();
  };
  for (const auto& r : rows) {
    if (r.t != cur_t) {
      flush(cur_t);
      cur_t = r.t;
    }
    auto& row = pending[key(r.comp, r.p)];
    if (row.empty()) row.assign(static_cast<std::size_t>(rec.block_count()), 0.0);
    row[static_cast<std::size_t>(r.j - jmin)] = r.v;
  }
  flush(cur_t);
  return rec;
}

}  // namespace nsflab
