#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>

#include "nsflab/config.hpp"
#include "nsflab/harness.hpp"
#include "oracles.hpp"

using namespace nsflab;

namespace {
struct Setup {
  GridSpec grid{3, 16, 2.0 * kPi};
  NondimensionalModel model = nondimensionalize(PhysicalParams{0.0, 0.5, 1.0, 1.0, 1.0, 1.0},
                                                PressureLaw::perfect_gas(1.0));
  DecayParams decay{3, 1.5, 2.0, 0.01, 0};

  State data(double amp, unsigned long long seed = 7) const {
    InitialDataSpec spec;
    spec.kind = InitialDataSpec::Kind::GaussianBump;
    spec.amplitude = amp;
    spec.width = 1.0;
    spec.seed = seed;
    return make_initial_data(spec, grid, decay);
  }
};

double state_max(const State& st) {
  double worst = 0.0;
  auto upd = [&](const SpectralField& u) {
    for (const auto& c : u.coeffs) worst = std::max(worst, std::abs(c));
  };
  upd(st.density);
  upd(st.velocity);
  upd(st.temperature);
  return worst;
}

double state_diff(const State& a, const State& b) {
  State d = a;
  d -= b;
  return state_max(d);
}
}  // namespace

TEST_CASE("integrating-factor step") {
  Setup s;

  SECTION("zero initial state stays zero") {
    State z(s.grid);
    detail::ExpTable full(s.grid, s.model.params, 0.1);
    State out = step(z, 0.1, s.model.params, s.model.table, Scheme::IFRK2, full);
    CHECK(state_max(out) == 0.0);
  }

  SECTION("with the nonlinearity off the step equals the exact semigroup") {
    State st = s.data(0.5);
    const double dt = 0.37;
    detail::ExpTable full(s.grid, s.model.params, dt);
    State lawson = step(st, dt, s.model.params, s.model.table, Scheme::IFRK2, full, nullptr,
                        /*nonlinear=*/false);
    State exact = apply_semigroup(st, dt, s.model.params);
    CHECK(state_diff(lawson, exact) < 1e-12 * std::max(1.0, state_max(exact)));
  }

  SECTION("self-convergence at the design orders") {
    State st = s.data(1.0);
    auto advance = [&](Scheme sch, double dt, double t_end) {
      detail::ExpTable full(s.grid, s.model.params, dt);
      detail::ExpTable half(s.grid, s.model.params, 0.5 * dt);
      State cur = st;
      const long long n = std::llround(t_end / dt);
      for (long long i = 0; i < n; ++i)
        cur = step(cur, dt, s.model.params, s.model.table, sch, full, &half);
      return cur;
    };
    const double T = 1.0;
    State ref = advance(Scheme::IFRK4, T / 64.0, T);

    const double e2a = state_diff(advance(Scheme::IFRK2, T / 4.0, T), ref);
    const double e2b = state_diff(advance(Scheme::IFRK2, T / 8.0, T), ref);
    CHECK(e2a / e2b == Catch::Approx(4.0).margin(1.2));

    const double e4a = state_diff(advance(Scheme::IFRK4, T / 4.0, T), ref);
    const double e4b = state_diff(advance(Scheme::IFRK4, T / 8.0, T), ref);
    CHECK(e4a / e4b > 10.0);
    CHECK(e4a / e4b < 26.0);
  }

  SECTION("vacuum guard aborts the step") {
    State st(s.grid);
    PhysicalField a(s.grid, 1);
    for (auto& v : a.values) v = -0.92;
    st.density = forward_transform(a);
    detail::ExpTable full(s.grid, s.model.params, 0.1);
    CHECK_THROWS_AS(step(st, 0.1, s.model.params, s.model.table, Scheme::IFRK2, full),
                    std::domain_error);
  }
}

TEST_CASE("integrate") {
  Setup s;

  SECTION("t_end = 0 returns the data and only the t = 0 record") {
    SolverConfig cfg;
    cfg.t_end = 0.0;
    State st = s.data(0.5);
    IntegrationResult res = integrate(st, cfg, s.model.params, s.model.table);
    CHECK(res.record.times().size() == 1);
    CHECK(state_diff(res.final_state, st) == 0.0);
  }

  SECTION("linear-only integration tracks the exact semigroup at record times") {
    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.nonlinear = false;
    State st = s.data(0.5);
    IntegrationResult res = integrate(st, cfg, s.model.params, s.model.table);
    State exact = apply_semigroup(st, 2.0, s.model.params);
    CHECK(state_diff(res.final_state, exact) < 1e-10 * std::max(1.0, state_max(exact)));
  }

  SECTION("geometric record count obeys the sampling bound") {
    SolverConfig cfg;
    cfg.t_end = 37.0;
    cfg.nonlinear = false;
    State st = s.data(0.2);
    IntegrationResult res = integrate(st, cfg, s.model.params, s.model.table);
    const double bound = 1.0 + std::log(cfg.t_end / cfg.record.t0) / std::log(cfg.record.q);
    CHECK(static_cast<double>(res.record.times().size() - 1) <= bound + 1.0);
  }

  SECTION("linear block norms never grow (mode-energy monotonicity)") {
    SolverConfig cfg;
    cfg.t_end = 5.0;
    cfg.nonlinear = false;
    State st = s.data(0.5);
    IntegrationResult res = integrate(st, cfg, s.model.params, s.model.table);
    const auto& ts = res.record.times();
    for (const char* comp : {"a", "upsilon", "theta"}) {
      // the triple norm per block is controlled by the full mode energy;
      // check the summed squares across components instead of each alone
      (void)comp;
    }
    for (int j = res.record.j_min(); j <= res.record.j_max(); ++j) {
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t it = 0; it < ts.size(); ++it) {
        const double e = std::hypot(std::hypot(res.record.value("a", 2.0, it, j),
                                               res.record.value("upsilon", 2.0, it, j)),
                                    res.record.value("theta", 2.0, it, j));
        CHECK(e <= prev * (1.0 + 1e-10) + 1e-300);
        prev = e;
      }
    }
  }

  SECTION("well-resolved nonlinear run keeps the upper spectrum empty") {
    SolverConfig cfg;
    cfg.t_end = 1.0;
    State st = s.data(1.0);
    IntegrationResult res = integrate(st, cfg, s.model.params, s.model.table);
    CHECK(res.upper_spectrum_fraction < 1e-8);
    CHECK(res.final_state.finite());
  }

  SECTION("nonlinear-minus-linear separation scales quadratically") {
    SolverConfig cfg;
    cfg.t_end = 1.0;
    auto run_diff = [&](double amp) {
      State st = s.data(amp);
      IntegrationResult nl = integrate(st, cfg, s.model.params, s.model.table);
      State lin = apply_semigroup(st, 1.0, s.model.params);
      State d = nl.final_state;
      d -= lin;
      SpectralField all(s.grid, 1);
      // B^0_{2,1} of the triple
      return besov_norm(d.density, {0.0, 2.0, 1.0}) + besov_norm(d.velocity, {0.0, 2.0, 1.0}) +
             besov_norm(d.temperature, {0.0, 2.0, 1.0});
    };
    const double ratio = run_diff(2e-2) / run_diff(1e-2);
    CHECK(ratio > 3.4);
    CHECK(ratio < 4.6);
  }

  SECTION("two-dimensional smoke run stays finite") {
    GridSpec g2{2, 16, 2.0 * kPi};
    State st(g2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    PhysicalField f(g2, 2);
    for (auto& v : f.values) v = 0.01 * dist(rng);
    st.velocity = forward_transform(f);
    dealias(st.velocity);
    SolverConfig cfg;
    cfg.t_end = 0.5;
    IntegrationResult res = integrate(st, cfg, s.model.params, s.model.table);
    CHECK(res.final_state.finite());
  }
}

TEST_CASE("checkpoints") {
  Setup s;
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "nsflab_ckpt_test.bin").string();

  SECTION("round trip is bit-exact") {
    State st = s.data(0.7);
    st.time = 3.25;
    save_checkpoint(st, s.model.params, path);
    Checkpoint back = load_checkpoint(path);
    CHECK(back.params.beta == s.model.params.beta);
    CHECK(back.params.gamma == s.model.params.gamma);
    CHECK(back.state.time == 3.25);
    CHECK(state_diff(back.state, st) == 0.0);
    fs::remove(path);
    fs::remove(path + ".json");
  }

  SECTION("missing sidecar is an error") {
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/nsflab"), std::runtime_error);
  }
}
