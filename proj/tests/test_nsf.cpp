#include <catch2/catch_amalgamated.hpp>

#include "nsflab/nonlinear.hpp"
#include "oracles.hpp"

using namespace nsflab;

namespace {
const PhysicalParams kUnitGas{0.0, 0.5, 1.0, 1.0, 1.0, 1.0};  // nu = 1, beta = gamma = 1

State band_limited_state(const GridSpec& g, unsigned seed, double amp) {
  State st(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto fill = [&](SpectralField& u) {
    PhysicalField f(g, u.comps);
    for (auto& v : f.values) v = dist(rng);
    u = forward_transform(f);
    const double s = g.mode_step();
    const std::size_t npts = g.points();
    for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
      const double r = s * std::sqrt(double(k0) * k0 + double(k1) * k1 + double(k2) * k2);
      const double w = std::exp(-r * r);
      for (int c = 0; c < u.comps; ++c) u.coeffs[c * npts + flat] *= amp * w;
    });
    for (int c = 0; c < u.comps; ++c) u.coeffs[c * npts] = cplx(0, 0);
    dealias(u);
  };
  fill(st.density);
  fill(st.velocity);
  fill(st.temperature);
  return st;
}

double max_abs(const SpectralField& u) {
  double worst = 0.0;
  for (const auto& c : u.coeffs) worst = std::max(worst, std::abs(c));
  return worst;
}
}  // namespace

TEST_CASE("stability check") {
  SECTION("perfect gas at unit reference passes with unit derivatives") {
    auto rep = check_stability(kUnitGas, PressureLaw::perfect_gas(1.0));
    CHECK(rep.stable);
    CHECK(rep.dP_drho == Catch::Approx(1.0));
    CHECK(rep.dP_dT == Catch::Approx(1.0));
  }
  SECTION("van der Waals with dominant attraction fails") {
    // dP/drho = -2 alpha rho + T beta delta / (delta - rho)^2 at rho = 1, T = 1
    auto pl = PressureLaw::van_der_waals(10.0, 1.0, 3.0);
    auto rep = check_stability(kUnitGas, pl);
    CHECK(rep.dP_drho == Catch::Approx(-20.0 + 3.0 / 4.0));
    CHECK_FALSE(rep.stable);
  }
  SECTION("vanishing shear viscosity is rejected") {
    PhysicalParams bad = kUnitGas;
    bad.mu = 0.0;
    CHECK_THROWS_AS(check_stability(bad, PressureLaw::perfect_gas(1.0)), std::invalid_argument);
  }
  SECTION("van der Waals pole at the reference density is an error") {
    auto pl = PressureLaw::van_der_waals(1.0, 1.0, 1.0);  // delta == rho_bar
    CHECK_THROWS_AS(check_stability(kUnitGas, pl), std::domain_error);
  }
}

TEST_CASE("nondimensionalization") {
  SECTION("perfect gas: gamma = sqrt(R/cv), independent of the reference state") {
    for (double rho_bar : {0.5, 1.0, 2.0})
      for (double T_bar : {0.7, 1.0, 3.0}) {
        PhysicalParams phys{0.1, 0.4, 0.8, 0.5, rho_bar, T_bar};
        auto model = nondimensionalize(phys, PressureLaw::perfect_gas(2.0));
        CHECK(model.params.gamma == Catch::Approx(std::sqrt(2.0 / 0.5)).epsilon(1e-14));
      }
  }
  SECTION("R = cv = 1 and kappa = nu give beta = gamma = 1 exactly") {
    auto model = nondimensionalize(kUnitGas, PressureLaw::perfect_gas(1.0));
    CHECK(model.params.gamma == 1.0);
    CHECK(model.params.beta == 1.0);
  }
  SECTION("lambda = 0, mu = 1: nu = 2 and mu_tilde = 1/2") {
    PhysicalParams phys{0.0, 1.0, 2.0, 1.0, 1.0, 1.0};
    auto model = nondimensionalize(phys, PressureLaw::perfect_gas(1.0));
    CHECK(model.params.mu_tilde == 0.5);
  }
  SECTION("joint rescaling of (lambda, mu, kappa) leaves the group invariant") {
    PhysicalParams phys{0.3, 0.7, 1.9, 1.3, 0.8, 1.4};
    auto base = nondimensionalize(phys, PressureLaw::perfect_gas(1.7)).params;
    for (double c : {0.25, 4.0}) {
      PhysicalParams scaled = phys;
      scaled.lambda *= c;
      scaled.mu *= c;
      scaled.kappa *= c;
      auto got = nondimensionalize(scaled, PressureLaw::perfect_gas(1.7)).params;
      CHECK(got.beta == Catch::Approx(base.beta).epsilon(1e-14));
      CHECK(got.gamma == Catch::Approx(base.gamma).epsilon(1e-14));
      CHECK(got.mu_tilde == Catch::Approx(base.mu_tilde).epsilon(1e-14));
    }
  }
  SECTION("unstable pressure law is rejected") {
    auto pl = PressureLaw::van_der_waals(10.0, 1.0, 3.0);
    CHECK_THROWS_AS(nondimensionalize(kUnitGas, pl), std::invalid_argument);
  }
}

TEST_CASE("coefficient table") {
  const CoefficientTable tab(kUnitGas, PressureLaw::perfect_gas(1.0));

  SECTION("all tabulated functions vanish at a = 0") {
    CHECK(tab.density_ratio(0.0) == 0.0);
    CHECK(tab.pressure_density_coef(0.0) == 0.0);
    CHECK(tab.pressure_temp_coef(0.0) == 0.0);
    CHECK(tab.pressure_integral_coef(0.0) == 0.0);
    CHECK(tab.div_coupling_coef(0.0) == 0.0);
  }
  SECTION("I(1) = 1/2") { CHECK(tab.density_ratio(1.0) == 0.5); }
  SECTION("perfect gas: K1(a) = -I(a) pointwise to 1e-12") {
    for (double a = -0.8; a <= 2.0; a += 0.05)
      CHECK(tab.pressure_density_coef(a) ==
            Catch::Approx(-tab.density_ratio(a)).margin(1e-12));
  }
  SECTION("K2 and K~1 agree pointwise (identical defining displays)") {
    const CoefficientTable vdw(kUnitGas, PressureLaw::van_der_waals(0.05, 1.0, 4.0));
    for (double a : {-0.5, 0.0, 0.3, 1.5})
      CHECK(vdw.pressure_temp_coef(a) == vdw.div_coupling_coef(a));
  }
  SECTION("quadrature matches the closed form through the polynomial route") {
    // pi1 = R rho written as a polynomial forces the Gauss-Legendre path;
    // the perfect-gas table uses R log(1+a)
    const double R = 1.7;
    const CoefficientTable poly(kUnitGas,
                                PressureLaw::polynomial({0.0}, {0.0, R}));
    const CoefficientTable perf(kUnitGas, PressureLaw::perfect_gas(R));
    for (double a : {-0.7, -0.2, 0.0, 0.4, 2.0})
      CHECK(poly.pressure_integral_coef(a) ==
            Catch::Approx(perf.pressure_integral_coef(a)).margin(1e-12));
  }
  SECTION("vacuum is rejected") {
    CHECK_THROWS_AS(tab.density_ratio(-1.0), std::domain_error);
  }
  SECTION("dissipation form is a nonnegative sum of squares for lambda >= 0") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    double grad[9];
    for (int t = 0; t < 50; ++t) {
      for (auto& v : grad) v = dist(rng);
      CHECK(tab.dissipation_form(grad, 3) >= 0.0);
    }
  }
}

TEST_CASE("nonlinear terms") {
  const GridSpec g{3, 16, 2.0 * kPi};
  auto model = nondimensionalize(kUnitGas, PressureLaw::perfect_gas(1.0));

  SECTION("zero state maps to zero") {
    State st(g);
    auto nl = nonlinear_terms(st, model.table, model.params);
    CHECK(max_abs(nl.mass) == 0.0);
    CHECK(max_abs(nl.momentum) == 0.0);
    CHECK(max_abs(nl.heat) == 0.0);
  }

  SECTION("solenoidal velocity alone: f = 0, g = -v.grad v, k keeps only Q") {
    State st(g);
    st.velocity = leray_project(band_limited_state(g, 3, 0.1).velocity);
    dealias(st.velocity);
    auto nl = nonlinear_terms(st, model.table, model.params);

    // f = -div(a v) with a = 0
    CHECK(max_abs(nl.mass) < 1e-14);

    // reference advection: pseudo-spectral -v.grad v with the same dealias
    PhysicalField vel = inverse_transform(st.velocity);
    std::vector<PhysicalField> dvel(3);
    for (int ax = 0; ax < 3; ++ax)
      dvel[ax] = inverse_transform(apply_multiplier(
          st.velocity, [ax](const std::array<double, 3>& xi) { return cplx(0.0, xi[ax]); }));
    PhysicalField adv(g, 3);
    for (std::size_t i = 0; i < g.points(); ++i)
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int ax = 0; ax < 3; ++ax) acc += vel.at(ax, i) * dvel[ax].at(c, i);
        adv.at(c, i) = -acc;
      }
    SpectralField expect = forward_transform(adv);
    dealias(expect);
    SpectralField diff = nl.momentum - expect;
    CHECK(max_abs(diff) < 1e-12 * std::max(1.0, max_abs(expect)));

    // k = Q(grad v, grad v) only; its value must be the quadratic form
    PhysicalField kphys(g, 1);
    for (std::size_t i = 0; i < g.points(); ++i) {
      double gv[9];
      for (int ax = 0; ax < 3; ++ax)
        for (int c = 0; c < 3; ++c) gv[c * 3 + ax] = dvel[ax].at(c, i);
      kphys.values[i] = model.table.dissipation_form(gv, 3);
    }
    SpectralField kexpect = forward_transform(kphys);
    dealias(kexpect);
    SpectralField kdiff = nl.heat - kexpect;
    CHECK(max_abs(kdiff) < 1e-12 * std::max(1.0, max_abs(kexpect)));
  }

  SECTION("the mass term has exactly zero mean") {
    State st = band_limited_state(g, 11, 0.05);
    auto nl = nonlinear_terms(st, model.table, model.params);
    CHECK(std::abs(nl.mass.coeffs[0]) == 0.0);
  }

  SECTION("quadratic leading order in the amplitude") {
    State base = band_limited_state(g, 13, 1.0);
    auto norm2 = [](const SpectralField& u) {
      double acc = 0.0;
      for (const auto& c : u.coeffs) acc += std::norm(c);
      return std::sqrt(acc);
    };
    const double eps = 1e-3;
    for (double scale : {1.0}) {
      State big = base;
      big *= eps * scale;
      State small = base;
      small *= 0.5 * eps * scale;
      auto nb = nonlinear_terms(big, model.table, model.params);
      auto ns = nonlinear_terms(small, model.table, model.params);
      CHECK(norm2(nb.mass) / norm2(ns.mass) == Catch::Approx(4.0).epsilon(0.05));
      CHECK(norm2(nb.momentum) / norm2(ns.momentum) == Catch::Approx(4.0).epsilon(0.05));
      CHECK(norm2(nb.heat) / norm2(ns.heat) == Catch::Approx(4.0).epsilon(0.05));
    }
  }

  SECTION("vacuum guard trips on large negative density") {
    State st(g);
    PhysicalField a(g, 1);
    for (auto& v : a.values) v = -0.95;
    st.density = forward_transform(a);
    CHECK_THROWS_AS(nonlinear_terms(st, model.table, model.params), std::domain_error);
  }
}

TEST_CASE("effective velocity and Helmholtz reconstruction") {
  const GridSpec g{3, 16, 2.0 * kPi};

  SECTION("a matching div v in Fourier gives w = 0") {
    State st(g);
    st.velocity = band_limited_state(g, 17, 1.0).velocity;
    st.density = divergence(st.velocity);
    CHECK(max_abs(effective_velocity(st)) < 1e-13);
  }

  SECTION("gradient velocity with a = 0 returns itself: w = grad phi") {
    State st(g);
    SpectralField phi = band_limited_state(g, 19, 1.0).density;
    st.velocity = gradient(phi);
    SpectralField w = effective_velocity(st);
    SpectralField diff = w - st.velocity;
    CHECK(max_abs(diff) < 1e-12 * std::max(1.0, max_abs(st.velocity)));
  }

  SECTION("w is curl-free: its Leray projection vanishes") {
    State st = band_limited_state(g, 23, 1.0);
    SpectralField w = effective_velocity(st);
    CHECK(max_abs(leray_project(w)) < 1e-12 * std::max(1.0, max_abs(w)));
  }

  SECTION("solenoidal velocity: w cancels against the density potential") {
    State st(g);
    st.density = band_limited_state(g, 29, 1.0).density;
    st.velocity = leray_project(band_limited_state(g, 31, 1.0).velocity);
    SpectralField w = effective_velocity(st);
    // w should equal grad (-Lap)^{-1} a
    SpectralField expect = gradient(inv_neg_laplacian(st.density));
    SpectralField diff = w - expect;
    CHECK(max_abs(diff) < 1e-12 * std::max(1.0, max_abs(expect)));
  }

  SECTION("round trip through the reconstruction identity is exact") {
    State st = band_limited_state(g, 37, 1.0);
    SpectralField w = effective_velocity(st);
    SpectralField sol = leray_project(st.velocity);
    SpectralField back = helmholtz_reconstruct(w, st.density, sol);
    SpectralField diff = back - st.velocity;
    CHECK(max_abs(diff) < 1e-12 * std::max(1.0, max_abs(st.velocity)));
  }

  SECTION("a = 0 and w = 0 return the solenoidal part") {
    State st(g);
    SpectralField sol = leray_project(band_limited_state(g, 41, 1.0).velocity);
    SpectralField w(g, 3);
    SpectralField got = helmholtz_reconstruct(w, st.density, sol);
    SpectralField diff = got - sol;
    CHECK(max_abs(diff) == 0.0);
  }

  SECTION("grid mismatch is rejected") {
    const GridSpec g2{3, 8, 2.0 * kPi};
    SpectralField w(g, 3), a(g2, 1), sol(g, 3);
    CHECK_THROWS_AS(helmholtz_reconstruct(w, a, sol), std::invalid_argument);
  }
}
