#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/error.hpp"
#include "nsk/mollifier.hpp"
#include "nsk/sweep.hpp"

using namespace nsk;

namespace {

Trajectory simulate(const LagState& s0, double kappa, double dt, double T, std::size_t every) {
  SolverConfig c;
  c.dt_initial = dt;
  c.t_end = T;
  c.snapshot_every = every;
  return run(s0, GasParams(1.0, 1.0, 1.0, kappa), c);
}

LagState normalized_smooth(std::size_t n) {
  InitialFields f{test::sampled(n, 1.0, 0.3), test::sampled(n, 0.0, 0.1),
                  test::sampled(n, 1.0, 0.2, true)};
  galilean_normalize(f);
  return make_initial_state(f.rho, f.u, f.theta);
}

}  // namespace

TEST_CASE("time derivative is exact for quadratics on uneven times") {
  const Field t{0.0, 0.1, 0.25, 0.3, 0.6, 0.65};
  Field v(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) v[k] = 3.0 * t[k] * t[k] - 2.0 * t[k] + 0.5;
  const Field d = time_derivative(v, t);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(d[k] == doctest::Approx(6.0 * t[k] - 2.0).epsilon(1e-12));
  const Field c = time_derivative(Field(t.size(), 4.2), t);
  for (double x : c) CHECK(x == 0.0);
}

TEST_CASE("cumulative trapezoid and interior maximum") {
  const Field t{0.0, 0.5, 1.5, 2.0};
  const Field v{1.0, 2.0, 4.0, 5.0};  // linear: 1 + 2t
  const Field c = cumulative_trapezoid(v, t);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(c[k] == doctest::Approx(t[k] + t[k] * t[k]));
  CHECK(max_interior({9.0, 1.0, 3.0, 7.0}) == 3.0);
  CHECK(time_weight(0.25) == 0.25);
  CHECK(time_weight(3.0) == 1.0);
}

TEST_CASE("constant state: identity residuals vanish exactly") {
  for (double kappa : {0.0, 0.01, 0.1}) {
    const auto traj = simulate(test::constant_state(32, 1.0, 1.0), kappa, 0.01, 1.0, 10);
    const auto r = evaluate(traj);
    for (double v : r.entropy.residual) CHECK(v == 0.0);
    for (double v : r.sigma_pde_residual) CHECK(v == 0.0);
    for (double v : r.pgamma_residual) CHECK(v == 0.0);
    for (double v : r.flow_map_residual) CHECK(v == 0.0);
    CHECK(r.conserved.energy_drift == 0.0);
    CHECK(r.hoff.first.sup_int_dxu_sq == 0.0);
    CHECK(r.hoff.second.int_w_int_dtsigma_sq == 0.0);
    // sigma = -1 everywhere: int sigma^2 = 1, A1 = 1, A2 = 1 + t.
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      CHECK(r.hoff.A1[k] == doctest::Approx(1.0));
      CHECK(r.hoff.A2[k] == doctest::Approx(1.0 + r.times[k]));
    }
    // D_t^{-1} sigma = -t: max 1 against 2 sqrt 2 + 3.
    REQUIRE(r.dtinv_applicable);
    CHECK(r.dtinv.max_abs == doctest::Approx(1.0));
    CHECK(r.dtinv.bound == doctest::Approx(2.0 * std::sqrt(2.0) + 3.0));
  }
}

TEST_CASE("identity residuals shrink under refinement") {
  double prev_e = 1e9, prev_s = 1e9, prev_p = 1e9;
  for (std::size_t n : {64u, 128u, 256u}) {
    const auto traj = simulate(test::smooth_state(n), 0.05, 0.128 / n, 0.05, 2);
    const double e = max_interior(entropy_balance(traj, traj.params).residual);
    const double s = max_interior(sigma_pde_residual(traj, traj.params));
    const double p = max_interior(pgamma_identity_residual(traj, traj.params));
    CHECK(e < 0.6 * prev_e);
    CHECK(s < 0.6 * prev_s);
    CHECK(p < 0.6 * prev_p);
    prev_e = e;
    prev_s = s;
    prev_p = p;
  }
}

TEST_CASE("negative controls: wrong pressure sign and dropped conduction") {
  const auto traj = simulate(test::smooth_state(128), 0.05, 1e-3, 0.05, 2);
  const double good = max_interior(sigma_pde_residual(traj, traj.params));
  const double flipped =
      max_interior(sigma_pde_residual(traj, traj.params, StressVariant::kFlippedPressure));
  CHECK(flipped > 20.0 * good);

  const double with = max_interior(pgamma_identity_residual(traj, traj.params, true));
  const double without = max_interior(pgamma_identity_residual(traj, traj.params, false));
  CHECK(without > 10.0 * with);

  // Without conduction the two forms coincide.
  const auto t0 = simulate(test::smooth_state(64), 0.0, 1e-3, 0.02, 2);
  CHECK(pgamma_identity_residual(t0, t0.params, true) == pgamma_identity_residual(t0, t0.params, false));
}

TEST_CASE("entropy production is non-negative and matches the entropy rise") {
  const auto traj = simulate(test::smooth_state(128), 0.05, 1e-3, 0.1, 5);
  const auto b = entropy_balance(traj, traj.params);
  for (double v : b.rate) CHECK(v >= 0.0);
  for (std::size_t k = 1; k < b.production.size(); ++k) CHECK(b.production[k] >= b.production[k - 1]);
  const double rise = b.entropy.back() - b.entropy.front();
  CHECK(rise == doctest::Approx(b.production.back()).epsilon(0.02));
}

TEST_CASE("Hoff functionals: sign and ordering") {
  const auto traj = simulate(test::smooth_state(64), 0.01, 1e-3, 0.2, 10);
  const auto h = hoff_energies(traj, traj.params);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    CHECK(h.A2[k] >= h.A1[k]);
    CHECK(h.A1[k] >= h.int_sigma_sq[k]);
  }
  const auto& a = h.first;
  for (double v : {a.sup_int_sigma_sq, a.sup_int_dxu_sq, a.kappa_int_int_dxtheta_sq,
                   a.int_int_dxsigma_sq, a.int_int_dtu_sq, a.int_sup_sigma_sq, a.int_sup_dxu_sq}) {
    CHECK(v > 0.0);
  }
  CHECK(a.sup_u_sq == doctest::Approx(0.01).epsilon(0.05));
  // kappa-weighted terms vanish with kappa.
  const auto t0 = simulate(test::smooth_state(64), 0.0, 1e-3, 0.2, 10);
  const auto h0 = hoff_energies(t0, t0.params);
  CHECK(h0.first.kappa_int_int_dxtheta_sq == 0.0);
  CHECK(h0.second.sup_w_kappa_int_dxtheta_sq == 0.0);
  CHECK(h0.second.int_w_int_dx_kappa_dxtheta_sq == 0.0);
}

TEST_CASE("extrema record") {
  const auto traj = simulate(test::smooth_state(64), 0.01, 1e-3, 0.1, 10);
  const auto e = bounds_report(traj);
  CHECK(e.rho_min.size() == traj.size());
  CHECK(e.rho_min.front() == doctest::Approx(1.0 - 0.3).epsilon(1e-2));
  CHECK(e.global_theta_max >= e.theta_max.front());
  CHECK(e.global_rho_min <= e.global_rho_max);
}

TEST_CASE("dtinv check needs zero momentum") {
  const auto raw = simulate(test::smooth_state(64), 0.01, 1e-3, 0.2, 10);
  CHECK_THROWS_AS(dtinv_sigma_check(raw, raw.params), NormalizationError);
  CHECK_FALSE(evaluate(raw).dtinv_applicable);

  const auto traj = simulate(normalized_smooth(64), 0.01, 1e-3, 0.2, 10);
  const auto d = dtinv_sigma_check(traj, traj.params);
  CHECK(d.pass);
  CHECK(d.max_abs < d.bound);
}

TEST_CASE("resolution ratio separates smooth data from grid-scale jumps") {
  CHECK(derivative_resolution_ratio(test::sampled(128, 1.0, 0.3)) == doctest::Approx(1.0).epsilon(0.01));
  Field jump(128, 0.7);
  for (std::size_t j = 32; j < 96; ++j) jump[j] = 1.3;
  CHECK(derivative_resolution_ratio(jump) > 1.5);
  CHECK(derivative_resolution_ratio(Field(64, 2.0)) == 1.0);
}

TEST_CASE("weighted regularity") {
  const auto t0 = simulate(test::smooth_state(64), 0.0, 1e-3, 0.1, 10);
  const auto w0 = weighted_regularity(t0, t0.params, 0.5);
  CHECK(w0.sup_kappa_int_dxtheta_sq == 0.0);
  CHECK_FALSE(w0.ill_prepared);
  CHECK_THROWS_AS(weighted_regularity(t0, t0.params, 1.0), DomainError);

  const auto t1 = simulate(test::smooth_state(64), 0.01, 1e-3, 0.1, 10);
  const auto w1 = weighted_regularity(t1, t1.params, 0.5);
  CHECK(w1.data_weighted_norm > 0.0);
  // kappa^(1/2) = 10 kappa at kappa = 0.01.
  CHECK(w1.sup_kalpha_int_dxtheta_sq == doctest::Approx(10.0 * w1.sup_kappa_int_dxtheta_sq));
}

TEST_CASE("evaluate needs three snapshots") {
  const auto traj = simulate(test::smooth_state(32), 0.0, 0.01, 0.1, 0);
  CHECK(traj.size() == 2);
  CHECK_THROWS_AS(evaluate(traj), InsufficientSnapshots);
}

TEST_CASE("conservation drifts on a random smooth run (property)") {
  test::Gen gen(21);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 32 * gen.index(1, 3);
    const auto s = make_initial_state(gen.smooth(n, 1.0, 0.3), gen.smooth(n, 0.0, 0.2),
                                      gen.smooth(n, 1.0, 0.3));
    const auto traj = simulate(s, gen.uniform(0.0, 0.1), 1e-3, 0.05, 10);
    const auto c = conserved_integrals(traj);
    CHECK(c.mass_drift == 0.0);
    CHECK(c.energy_drift < 1e-12);
    CHECK(c.momentum_drift < 1e-12);
  }
}
