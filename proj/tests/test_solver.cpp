#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/error.hpp"
#include "nsk/solver.hpp"

using namespace nsk;

namespace {

SolverConfig config(double dt, double T, std::size_t every = 0, int order = 2) {
  SolverConfig c;
  c.dt_initial = dt;
  c.t_end = T;
  c.snapshot_every = every;
  c.scheme_order = order;
  return c;
}

LagState mirrored(const LagState& s) {
  LagState m = s;
  const std::size_t n = s.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = n - 1 - j;
    m.rho[j] = s.rho[k];
    m.u[j] = -s.u[k];
    m.theta[j] = s.theta[k];
    m.rho0[j] = s.rho0[k];
    m.x_pos[j] = 1.0 - s.x_pos[k];
  }
  return m;
}

LagState shifted(const LagState& s, std::size_t by) {
  LagState m = s;
  const std::size_t n = s.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + n - by) % n;
    m.rho[j] = s.rho[k];
    m.u[j] = s.u[k];
    m.theta[j] = s.theta[k];
    m.rho0[j] = s.rho0[k];
    // Keep the lift continuous: wrapped cells move by one period.
    m.x_pos[j] = s.x_pos[k] + static_cast<double>(by) / n - (k > j ? 1.0 : 0.0);
  }
  return m;
}

}  // namespace

TEST_CASE("constant state is a bit-exact steady state") {
  for (double kappa : {0.0, 0.01, 0.1}) {
    for (int order : {1, 2}) {
      const GasParams gas(1.0, 1.0, 1.0, kappa);
      const auto s0 = test::constant_state(32, 1.3, 0.7);
      const auto traj = run(s0, gas, config(1e-2, 0.5, 10, order));
      for (const auto& s : traj.snapshots) {
        CHECK(s.rho == s0.rho);
        CHECK(s.u == s0.u);
        CHECK(s.theta == s0.theta);
        CHECK(s.x_pos == s0.x_pos);
      }
    }
  }
}

TEST_CASE("step count and snapshot cadence") {
  const GasParams gas(1.0, 1.0, 1.0, 0.0);
  const auto s0 = test::constant_state(16);
  auto traj = run(s0, gas, config(0.01, 1.0, 10));
  CHECK(traj.dt_history.size() == 100);
  CHECK(traj.size() == 11);
  CHECK(traj.times.back() == 1.0);
  for (std::size_t k = 1; k < traj.size(); ++k) CHECK(traj.times[k] == doctest::Approx(0.1 * k));

  SolverConfig c = config(0.01, 1.0);
  c.snapshot_dt = 0.25;
  CHECK(run(s0, gas, c).size() == 5);
  c.snapshot_dt = 0.0;
  CHECK(run(s0, gas, c).size() == 2);
}

TEST_CASE("solver configuration is validated") {
  const GasParams gas(1.0, 1.0, 1.0, 0.0);
  const auto s0 = test::constant_state(16);
  CHECK_THROWS_AS(run(s0, gas, config(0.0, 1.0)), ConfigError);
  CHECK_THROWS_AS(run(s0, gas, config(0.1, -1.0)), ConfigError);
  CHECK_THROWS_AS(run(s0, gas, config(0.1, 1.0, 0, 3)), ConfigError);
  SolverConfig c = config(0.1, 1.0);
  c.cfl_safety = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(step(s0, 0.0, gas), DomainError);
}

TEST_CASE("large nominal steps are sub-cycled below the stability cap") {
  const GasParams gas(1.0, 1.0, 1.0, 0.01);
  const auto s0 = test::smooth_state(128);
  const auto traj = run(s0, gas, config(0.05, 0.1));
  CHECK(traj.dt_history.size() > 2);
  const double cap0 = stable_dt(s0, gas, 0.5);
  CHECK(cap0 < 0.05);
  CHECK(*std::max_element(traj.dt_history.begin(), traj.dt_history.end()) <= 2.0 * cap0);
  double sum = 0.0;
  for (double dt : traj.dt_history) sum += dt;
  CHECK(sum == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("stable_dt scales with the grid spacing") {
  const GasParams gas(1.0, 1.0, 1.0, 0.0);
  const double a = stable_dt(test::constant_state(64), gas, 0.5);
  const double b = stable_dt(test::constant_state(128), gas, 0.5);
  CHECK(a / b == doctest::Approx(2.0));
  // Acoustic bound: dx / sqrt(gamma R theta) with gamma = 2.
  CHECK(a == doctest::Approx(0.5 / 64 / std::sqrt(2.0)));
}

TEST_CASE("conservation on smooth data") {
  const GasParams gas(1.0, 1.0, 1.0, 0.01);
  const auto s0 = test::smooth_state(64);
  const auto traj = run(s0, gas, config(1e-3, 0.2, 20));
  const auto c = conserved_integrals(traj);
  CHECK(c.mass_drift == 0.0);
  CHECK(c.energy_drift < 1e-12);
  CHECK(c.momentum_drift < 1e-12);

  // Order 1 drifts at O(dt).
  const double d1 = conserved_integrals(run(s0, gas, config(4e-4, 0.2, 0, 1))).energy_drift;
  const double d2 = conserved_integrals(run(s0, gas, config(2e-4, 0.2, 0, 1))).energy_drift;
  CHECK(d1 > 1e-8);
  CHECK(std::log2(d1 / d2) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("kappa = 0 and tiny kappa agree to round-off") {
  const auto s0 = test::smooth_state(64);
  const auto a = step(s0, 1e-3, GasParams(1.0, 1.0, 1.0, 0.0));
  const auto b = step(s0, 1e-3, GasParams(1.0, 1.0, 1.0, 1e-15));
  CHECK(test::max_abs([&] {
          Field d(a.size());
          for (std::size_t j = 0; j < d.size(); ++j) d[j] = a.theta[j] - b.theta[j];
          return d;
        }()) < 1e-13);
}

TEST_CASE("mirror symmetry is preserved (property)") {
  test::Gen gen(5);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 16 * gen.index(1, 4);
    const auto s = make_initial_state(gen.smooth(n, 1.0, 0.3), gen.smooth(n, 0.0, 0.2),
                                      gen.smooth(n, 1.0, 0.3));
    const GasParams gas(gen.uniform(0.5, 2.0), 1.0, gen.uniform(0.5, 2.0), gen.uniform(0.0, 0.2));
    for (int order : {1, 2}) {
      const auto a = mirrored(step(s, 1e-3, gas, order));
      const auto b = step(mirrored(s), 1e-3, gas, order);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(a.rho[j] == doctest::Approx(b.rho[j]).epsilon(1e-12));
        CHECK(a.u[j] == doctest::Approx(b.u[j]).epsilon(1e-12).scale(1.0));
        CHECK(a.theta[j] == doctest::Approx(b.theta[j]).epsilon(1e-12));
        CHECK(a.x_pos[j] == doctest::Approx(b.x_pos[j]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("cyclic shifts commute with a step (property)") {
  test::Gen gen(9);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 32;
    const std::size_t by = gen.index(1, n - 1);
    const auto s = make_initial_state(gen.smooth(n, 1.0, 0.3), gen.smooth(n, 0.0, 0.2),
                                      gen.smooth(n, 1.0, 0.3));
    const GasParams gas(1.0, 1.0, 1.0, gen.uniform(0.0, 0.2));
    const auto a = shifted(step(s, 1e-3, gas), by);
    const auto b = step(shifted(s, by), 1e-3, gas);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(a.rho[j] == doctest::Approx(b.rho[j]).epsilon(1e-12));
      CHECK(a.theta[j] == doctest::Approx(b.theta[j]).epsilon(1e-12));
      CHECK(a.x_pos[j] == doctest::Approx(b.x_pos[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("flow map stays consistent with the density") {
  const GasParams gas(1.0, 1.0, 1.0, 0.01);
  const auto traj = run(test::smooth_state(128), gas, config(1e-3, 0.2, 20));
  CHECK(flow_map_consistency(traj) < 1e-6);
  CHECK(flow_map_residual(traj.initial()) < 1e-14);
}

TEST_CASE("positivity loss is detected, not clipped") {
  const GasParams gas(0.01, 1.0, 1.0, 0.0);
  const auto s = make_initial_state(Field(16, 1.0), test::sampled(16, 0.0, 50.0), Field(16, 1.0));
  CHECK_THROWS_AS(step(s, 0.5, gas, 1), PositivityError);
}

TEST_CASE("material antiderivative of a constant is time") {
  const GasParams gas(1.0, 1.0, 1.0, 0.0);
  const auto traj = run(test::smooth_state(32), gas, config(0.01, 0.5, 5));
  const auto m = material_antiderivative(traj, [](const LagState& s) { return Field(s.size(), 1.0); });
  REQUIRE(m.size() == traj.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    for (double v : m[k]) CHECK(v == doctest::Approx(traj.times[k]));
  }
}
