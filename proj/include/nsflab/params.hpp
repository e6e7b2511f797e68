#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsflab/linear.hpp"

namespace nsflab {

// Physical inputs of the viscous heat-conductive gas around a constant
// equilibrium (rho_bar, 0, T_bar).
struct PhysicalParams {
  double lambda = 0.0;   // bulk viscosity coefficient
  double mu = 0.5;       // shear viscosity
  double kappa = 1.0;    // heat conductivity
  double cv = 1.0;       // specific heat at constant volume
  double rho_bar = 1.0;  // reference density
  double T_bar = 1.0;    // reference temperature

  double nu() const { return lambda + 2.0 * mu; }

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("PhysicalParams: mu must be > 0");
    if (!(nu() > 0.0)) throw std::invalid_argument("PhysicalParams: lambda + 2 mu must be > 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("PhysicalParams: kappa must be > 0");
    if (!(cv > 0.0)) throw std::invalid_argument("PhysicalParams: cv must be > 0");
    if (!(rho_bar > 0.0) || !(T_bar > 0.0))
      throw std::invalid_argument("PhysicalParams: reference state must be positive");
  }
};

// Pressure of the form P(rho, T) = pi0(rho) + T pi1(rho).
class PressureLaw {
 public:
  enum class Kind { Perfect, VanDerWaals, Polynomial };

  static PressureLaw perfect_gas(double R) {
    if (!(R > 0.0)) throw std::invalid_argument("PressureLaw: R must be > 0");
    PressureLaw pl;
    pl.kind_ = Kind::Perfect;
    pl.R_ = R;
    return pl;
  }

  static PressureLaw van_der_waals(double alpha, double beta, double delta) {
    if (!(alpha > 0.0 && beta > 0.0 && delta > 0.0))
      throw std::invalid_argument("PressureLaw: van der Waals parameters must be > 0");
    PressureLaw pl;
    pl.kind_ = Kind::VanDerWaals;
    pl.alpha_ = alpha;
    pl.beta_ = beta;
    pl.delta_ = delta;
    return pl;
  }

  // pi0 and pi1 as polynomials in rho, lowest degree first.
  static PressureLaw polynomial(std::vector<double> pi0, std::vector<double> pi1) {
    PressureLaw pl;
    pl.kind_ = Kind::Polynomial;
    pl.pi0_coef_ = std::move(pi0);
    pl.pi1_coef_ = std::move(pi1);
    return pl;
  }

  Kind kind() const { return kind_; }
  double gas_constant() const { return R_; }

  double pi0(double rho) const {
    switch (kind_) {
      case Kind::Perfect: return 0.0;
      case Kind::VanDerWaals: return -alpha_ * rho * rho;
      default: return poly_eval(pi0_coef_, rho);
    }
  }
  double pi1(double rho) const {
    switch (kind_) {
      case Kind::Perfect: return R_ * rho;
      case Kind::VanDerWaals: check_pole(rho); return beta_ * rho / (delta_ - rho);
      default: return poly_eval(pi1_coef_, rho);
    }
  }
  double dpi0(double rho) const {
    switch (kind_) {
      case Kind::Perfect: return 0.0;
      case Kind::VanDerWaals: return -2.0 * alpha_ * rho;
      default: return poly_deriv(pi0_coef_, rho);
    }
  }
  double dpi1(double rho) const {
    switch (kind_) {
      case Kind::Perfect: return R_;
      case Kind::VanDerWaals: {
        check_pole(rho);
        const double dd = delta_ - rho;
        return beta_ * delta_ / (dd * dd);
      }
      default: return poly_deriv(pi1_coef_, rho);
    }
  }

  double pressure(double rho, double T) const { return pi0(rho) + T * pi1(rho); }
  double dpressure_drho(double rho, double T) const { return dpi0(rho) + T * dpi1(rho); }
  double dpressure_dT(double rho) const { return pi1(rho); }

 private:
  static double poly_eval(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }
  static double poly_deriv(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) acc = acc * x + i * c[i];
    return acc;
  }
  void check_pole(double rho) const {
    if (rho == delta_)
      throw std::domain_error("PressureLaw: van der Waals law is singular at rho = delta");
  }

  Kind kind_ = Kind::Perfect;
  double R_ = 1.0;
  double alpha_ = 0.0, beta_ = 0.0, delta_ = 0.0;
  std::vector<double> pi0_coef_, pi1_coef_;
};

struct StabilityReport {
  double dP_drho = 0.0;
  double dP_dT = 0.0;
  bool viscosity_ok = false;
  bool stable = false;
};

// Linear stability at the equilibrium: both pressure derivatives positive and
// the viscosity signs admissible.
inline StabilityReport check_stability(const PhysicalParams& phys, const PressureLaw& pl) {
  phys.validate();
  StabilityReport rep;
  rep.dP_drho = pl.dpressure_drho(phys.rho_bar, phys.T_bar);
  rep.dP_dT = pl.dpressure_dT(phys.rho_bar);
  rep.viscosity_ok = phys.mu > 0.0 && phys.nu() > 0.0;
  rep.stable = rep.viscosity_ok && rep.dP_drho > 0.0 && rep.dP_dT > 0.0;
  return rep;
}

// Coefficient evaluators of the reformulated system. All vanish at a = 0
// except the temperature-divergence coupling, which need not.
class CoefficientTable {
 public:
  CoefficientTable(const PhysicalParams& phys, const PressureLaw& pl)
      : phys_(phys), pl_(pl) {
    chi0_ = 1.0 / std::sqrt(pl.dpressure_drho(phys.rho_bar, phys.T_bar));
    temp_scale_ = std::sqrt(phys.T_bar / phys.cv);
    fac_ = chi0_ / phys.rho_bar * temp_scale_;
    const double qden = phys.nu() * chi0_ * std::sqrt(phys.T_bar * phys.cv);
    q_shear_ = 2.0 * phys.mu / qden;
    q_bulk_ = phys.lambda / qden;
  }

  double chi0() const { return chi0_; }
  double q_shear() const { return q_shear_; }  // weight on sym(A):sym(B)
  double q_bulk() const { return q_bulk_; }    // weight on Tr A Tr B

  // I(a) = a / (1 + a)
  double density_ratio(double a) const {
    guard(a);
    return a / (1.0 + a);
  }

  // K1(a): relative pressure-gradient coefficient
  double pressure_density_coef(double a) const {
    guard(a);
    const double num = pl_.dpressure_drho(phys_.rho_bar * (1.0 + a), phys_.T_bar);
    const double den = (1.0 + a) * pl_.dpressure_drho(phys_.rho_bar, phys_.T_bar);
    return num / den - 1.0;
  }

  // K2(a): temperature-gradient coefficient
  double pressure_temp_coef(double a) const {
    guard(a);
    return fac_ * (pl_.pi1(phys_.rho_bar * (1.0 + a)) / (1.0 + a) - pl_.pi1(phys_.rho_bar));
  }

  // K3(a) = chi0 sqrt(T/cv) int_0^a pi1'(rho_bar (1+z))/(1+z) dz; closed form
  // for the perfect gas, fixed-order Gauss-Legendre otherwise.
  double pressure_integral_coef(double a) const {
    guard(a);
    const double pref = chi0_ * temp_scale_;
    if (pl_.kind() == PressureLaw::Kind::Perfect)
      return pref * pl_.gas_constant() * std::log1p(a);
    if (a == 0.0) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < kGaussN; ++i) {
      const double z = 0.5 * a * (kGaussX[i] + 1.0);
      acc += kGaussW[i] * pl_.dpi1(phys_.rho_bar * (1.0 + z)) / (1.0 + z);
    }
    return pref * 0.5 * a * acc;
  }

  // K~1(a): written in the source system with the same display as K2
  double div_coupling_coef(double a) const { return pressure_temp_coef(a); }

  // K~2(a): temperature-divergence coupling, nonzero at a = 0 in general
  double div_coupling_temp_coef(double a) const {
    guard(a);
    return pl_.pi1(phys_.rho_bar * (1.0 + a)) / (phys_.cv * phys_.rho_bar * (1.0 + a));
  }

  // Q(A, B) = q_shear sym(A):sym(B) + q_bulk Tr A Tr B, applied to velocity
  // gradients; nonnegative for lambda >= 0.
  double dissipation_form(const double* grad, int d) const {
    double sym2 = 0.0, tr = 0.0;
    for (int i = 0; i < d; ++i) {
      tr += grad[i * d + i];
      for (int j = 0; j < d; ++j) {
        const double s = 0.5 * (grad[i * d + j] + grad[j * d + i]);
        sym2 += s * s;
      }
    }
    return q_shear_ * sym2 + q_bulk_ * tr * tr;
  }

 private:
  static void guard(double a) {
    if (!(1.0 + a > 0.0)) throw std::domain_error("CoefficientTable: vacuum reached (1 + a <= 0)");
  }

  static constexpr int kGaussN = 32;
  static const double kGaussX[32];
  static const double kGaussW[32];

  PhysicalParams phys_;
  PressureLaw pl_;
  double chi0_ = 1.0;
  double temp_scale_ = 1.0;
  double fac_ = 1.0;
  double q_shear_ = 0.0;
  double q_bulk_ = 0.0;
};

// 32-point Gauss-Legendre nodes and weights on [-1, 1].
inline const double CoefficientTable::kGaussX[32] = {
    -0.99726386184948157, -0.98561151154526838, -0.96476225558750639, -0.93490607593773967,
    -0.8963211557660522,  -0.84936761373256997, -0.79448379596794239, -0.73218211874028971,
    -0.66304426693021523, -0.5877157572407623,  -0.50689990893222936, -0.42135127613063533,
    -0.33186860228212767, -0.23928736225213706, -0.14447196158279649, -0.04830766568773831,
    0.04830766568773831,  0.14447196158279649,  0.23928736225213706,  0.33186860228212767,
    0.42135127613063533,  0.50689990893222936,  0.5877157572407623,   0.66304426693021523,
    0.73218211874028971,  0.79448379596794239,  0.84936761373256997,  0.8963211557660522,
    0.93490607593773967,  0.96476225558750639,  0.98561151154526838,  0.99726386184948157};
inline const double CoefficientTable::kGaussW[32] = {
    0.0070186100094692984, 0.016274394730905965, 0.025392065309262427, 0.034273862913021626,
    0.042835898022226426,  0.050998059262376244, 0.058684093478535704, 0.065822222776361752,
    0.072345794108848449,  0.078193895787070311, 0.083311924226946846, 0.087652093004403908,
    0.091173878695763863,  0.093844399080804566, 0.095638720079274833, 0.096540088514727812,
    0.096540088514727812,  0.095638720079274833, 0.093844399080804566, 0.091173878695763863,
    0.087652093004403908,  0.083311924226946846, 0.078193895787070311, 0.072345794108848449,
    0.065822222776361752,  0.058684093478535704, 0.050998059262376244, 0.042835898022226426,
    0.034273862913021626,  0.025392065309262427, 0.016274394730905965, 0.0070186100094692984};

struct NondimensionalModel {
  DimensionlessParams params;
  CoefficientTable table;
};

// Physical-to-dimensionless pipeline. Requires linear stability.
inline NondimensionalModel nondimensionalize(const PhysicalParams& phys, const PressureLaw& pl) {
  const StabilityReport rep = check_stability(phys, pl);
  if (!rep.stable)
    throw std::invalid_argument("nondimensionalize: linear stability condition violated");
  DimensionlessParams dp;
  const double nu = phys.nu();
  dp.mu_tilde = phys.mu / nu;
  dp.beta = phys.kappa / (nu * phys.cv);
  const double chi0 = 1.0 / std::sqrt(rep.dP_drho);
  dp.gamma = chi0 / phys.rho_bar * std::sqrt(phys.T_bar / phys.cv) * pl.pi1(phys.rho_bar);
  dp.validate();
  return {dp, CoefficientTable(phys, pl)};
}

}  // namespace nsflab
