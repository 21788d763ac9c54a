#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "nsk/error.hpp"
#include "nsk/sweep.hpp"

using namespace nsk;

namespace {

SolverConfig short_run(double T = 0.1) {
  SolverConfig c;
  c.dt_initial = 1e-3;
  c.t_end = T;
  c.snapshot_every = 10;
  return c;
}

InitialFields reference_data(std::size_t n) {
  return {test::sampled(n, 1.0, 0.3), test::sampled(n, 0.0, 0.1), test::sampled(n, 1.0, 0.2, true)};
}

SweepConfig small_sweep(std::size_t threads) {
  SweepConfig c;
  c.kappas = {1e-1, 1e-2, 0.0};
  c.base = reference_data(64);
  c.solver = short_run();
  c.threads = threads;
  return c;
}

Trajectory run_random(test::Gen& gen, std::size_t n, double kappa) {
  const auto s = make_initial_state(gen.smooth(n, 1.0, 0.3), gen.smooth(n, 0.0, 0.2),
                                    gen.smooth(n, 1.0, 0.3));
  return run(s, GasParams(1.0, 1.0, 1.0, kappa), short_run(0.05));
}

}  // namespace

TEST_CASE("norm names round-trip") {
  for (DistanceNorm n : kAllNorms) CHECK(parse_norm(norm_name(n)) == n);
  CHECK(norm_name(DistanceNorm::kL2H1U) == "L2H1_u");
  CHECK_THROWS_AS(parse_norm("L3"), DomainError);
  for (ProbeField f : {ProbeField::kRho, ProbeField::kU, ProbeField::kTheta}) {
    CHECK(parse_probe_field(probe_field_name(f)) == f);
  }
  CHECK_THROWS_AS(parse_probe_field("pressure"), DomainError);
}

TEST_CASE("trajectory distances are pseudometrics (property)") {
  test::Gen gen(41);
  for (int trial = 0; trial < 4; ++trial) {
    const auto a = run_random(gen, 32, 0.01);
    const auto b = run_random(gen, 32, 0.0);
    const auto c = run_random(gen, 32, 0.05);
    for (DistanceNorm n : kAllNorms) {
      CHECK(trajectory_distance(a, a, n) == 0.0);
      const double ab = trajectory_distance(a, b, n);
      CHECK(ab > 0.0);
      CHECK(ab == doctest::Approx(trajectory_distance(b, a, n)).epsilon(1e-14));
      CHECK(ab <= trajectory_distance(a, c, n) + trajectory_distance(c, b, n) + 1e-14);
    }
  }
}

TEST_CASE("L2L2 distance of constant states has a closed form") {
  // Same grid, constant rho = 1, theta = 1 and 2: sqrt(T) * 1 with T = 0.5.
  SolverConfig c = short_run(0.5);
  const GasParams gas(1.0, 1.0, 1.0, 0.0);
  const auto a = run(test::constant_state(16, 1.0, 1.0), gas, c);
  const auto b = run(test::constant_state(16, 1.0, 2.0), gas, c);
  CHECK(trajectory_distance(a, b, DistanceNorm::kL2L2Theta) == doctest::Approx(std::sqrt(0.5)));
  CHECK(trajectory_distance(a, b, DistanceNorm::kL2L2Rho) == 0.0);
  CHECK(trajectory_distance(a, b, DistanceNorm::kL2H1U) == 0.0);
}

TEST_CASE("mismatched trajectories are rejected") {
  test::Gen gen(2);
  const auto a = run_random(gen, 32, 0.0);
  const auto b = run_random(gen, 64, 0.0);
  CHECK_THROWS_AS(trajectory_distance(a, b, DistanceNorm::kL2L2Rho), GridMismatch);
  SolverConfig c = short_run(0.05);
  c.snapshot_every = 25;
  const auto d = run(a.initial(), a.params, c);
  CHECK_THROWS_AS(trajectory_distance(a, d, DistanceNorm::kL2L2Rho), GridMismatch);
}

TEST_CASE("log-log fit") {
  const std::vector<double> x{1e-1, 1e-2, 1e-3, 0.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.7));
  const auto f = fit_loglog(x, y);
  CHECK_FALSE(f.degenerate);
  CHECK(f.rate == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.marker == "ok");
  CHECK(fit_loglog({1e-1, 1e-2}, {0.0, 0.0}).degenerate);
  CHECK(fit_loglog({1e-1}, {1.0}).degenerate);
}

TEST_CASE("Galilean normalisation removes the momentum (property)") {
  test::Gen gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen.index(8, 100);
    InitialFields f{gen.field(n, 0.5, 2.0), gen.field(n, -1.0, 1.0), gen.field(n, 0.5, 2.0)};
    const Field du = f.u;
    galilean_normalize(f);
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m += f.rho[j] * f.u[j];
    CHECK(std::abs(m) < 1e-12 * n);
    // A uniform shift only.
    for (std::size_t j = 1; j < n; ++j) CHECK(du[j] - f.u[j] == doctest::Approx(du[0] - f.u[0]));
  }
}

TEST_CASE("sweep configuration is validated") {
  auto c = small_sweep(1);
  c.kappas = {0.1, 0.2, 0.0};
  CHECK_THROWS_WITH_AS(c.validate(), "kappas must be strictly decreasing", ValidationError);
  c.kappas = {0.1, 0.01};
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = small_sweep(1);
  c.norms.clear();
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = small_sweep(1);
  c.base.u.pop_back();
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("small sweep: ordering, branch point and thread independence") {
  const auto one = kappa_limit_study(small_sweep(1));
  const auto many = kappa_limit_study(small_sweep(4));
  REQUIRE(one.rows.size() == 3);
  CHECK(one.rows.back().kappa == 0.0);
  for (DistanceNorm n : kAllNorms) {
    CHECK(one.is_monotone(n));
    CHECK(one.rows.back().dist(n) == 0.0);
    CHECK(one.rows[0].dist(n) > one.rows[1].dist(n));
    for (std::size_t i = 0; i < 3; ++i) CHECK(one.rows[i].dist(n) == many.rows[i].dist(n));
    CHECK(one.rate(n).rate == many.rate(n).rate);
  }
  CHECK(one.branch_distance < 1e-12);
  CHECK_FALSE(one.degenerate);
  for (const auto& r : one.rows) {
    CHECK(r.dtinv_applicable);
    CHECK(r.paired);
  }
  const auto u = kappa_uniformity(one);
  CHECK(u.size() == 14);
}

TEST_CASE("constant data give a degenerate sweep") {
  auto c = small_sweep(2);
  c.base = {Field(64, 1.0), Field(64, 0.0), Field(64, 1.0)};
  const auto r = kappa_limit_study(c);
  CHECK(r.degenerate);
  for (DistanceNorm n : kAllNorms) CHECK(r.rate(n).degenerate);
}

TEST_CASE("run failures carry the kappa") {
  auto c = small_sweep(2);
  c.kappas = {1e-4, 0.0};
  c.mollify = true;
  // eta = 1e-2 is below two cells of the 64-cell grid.
  try {
    kappa_limit_study(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == "KernelUnderresolved");
  }
}

TEST_CASE("perturbation profile") {
  const Field p = perturbation_profile(128);
  CHECK(*std::max_element(p.begin(), p.end()) == doctest::Approx(1.0).epsilon(1e-3));
  const Grid g(128);
  for (std::size_t j = 0; j < 128; ++j) {
    if (g.center(j) <= 0.25 || g.center(j) >= 0.75) CHECK(p[j] == 0.0);
    CHECK(p[j] == doctest::Approx(p[127 - j]).epsilon(1e-14));
  }
}

TEST_CASE("velocity perturbations propagate linearly") {
  ProbeConfig c;
  c.base = reference_data(64);
  c.solver = short_run();
  c.sizes = {1e-2, 1e-3, 1e-4};
  c.field = ProbeField::kU;
  c.threads = 2;
  const auto r = stability_probe(c);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.required_exponent == doctest::Approx(0.95));
  CHECK(r.fit.rate == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.pass);
}
