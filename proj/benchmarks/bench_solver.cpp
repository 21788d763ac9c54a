#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "nsk/diagnostics.hpp"
#include "nsk/solver.hpp"
#include "nsk/tridiag.hpp"

namespace {

nsk::LagState smooth_state(std::size_t n) {
  const nsk::Grid g(n);
  nsk::Field rho(n), u(n), theta(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = 2.0 * std::numbers::pi * g.center(j);
    rho[j] = 1.0 + 0.3 * std::sin(x);
    u[j] = 0.1 * std::sin(x);
    theta[j] = 1.0 + 0.2 * std::cos(x);
  }
  return nsk::make_initial_state(rho, u, theta);
}

void BM_Step(benchmark::State& st) {
  const auto s = smooth_state(static_cast<std::size_t>(st.range(0)));
  const nsk::GasParams gas(1.0, 1.0, 1.0, 0.01);
  const int order = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(nsk::step(s, 1e-4, gas, order));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Step)->ArgsProduct({{128, 256, 512, 1024}, {1, 2}})->Complexity(benchmark::oN);

void BM_CyclicSolve(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const nsk::Field lo(n, -1.0), di(n, 3.0), up(n, -1.0), rhs(n, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(nsk::solve_cyclic_tridiagonal(lo, di, up, rhs));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_CyclicSolve)->RangeMultiplier(2)->Range(128, 4096)->Complexity(benchmark::oN);

void BM_Run(benchmark::State& st) {
  const auto s = smooth_state(static_cast<std::size_t>(st.range(0)));
  const nsk::GasParams gas(1.0, 1.0, 1.0, 0.01);
  nsk::SolverConfig cfg;
  cfg.dt_initial = 1e-3;
  cfg.t_end = 0.1;
  cfg.snapshot_dt = 0.01;
  for (auto _ : st) benchmark::DoNotOptimize(nsk::run(s, gas, cfg));
}
BENCHMARK(BM_Run)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& st) {
  const auto s = smooth_state(static_cast<std::size_t>(st.range(0)));
  const nsk::GasParams gas(1.0, 1.0, 1.0, 0.01);
  nsk::SolverConfig cfg;
  cfg.dt_initial = 1e-3;
  cfg.t_end = 0.1;
  cfg.snapshot_every = 5;
  const auto traj = nsk::run(s, gas, cfg);
  for (auto _ : st) benchmark::DoNotOptimize(nsk::evaluate(traj));
}
BENCHMARK(BM_Evaluate)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
