#pragma once

// Time integration of the Lagrangian system
//
//   rho0 d_t rho   = -rho^2 D(u)
//   rho0 d_t u     = D(sigma),           sigma = mu (rho/rho0) D(u) - R rho theta
//   rho0 cv d_t th = sigma D(u) + D(kappa (rho/rho0) D(th))
//   d_t X          = u
//
// by an IMEX scheme: viscous and conductive fluxes are implicit (one cyclic
// tridiagonal solve per field, coefficients frozen within the step), pressure,
// compression work and viscous heating are explicit. Diffusion uses the
// compact face stencil; pressure/compression use the centred difference.
// Viscous heating is evaluated on faces with the same velocity that drives
// the kinetic-energy change, so the discrete total energy is conserved up to
// the scheme's own defect (order 1) or to round-off (order 2).

#include <cstddef>
#include <functional>
#include <vector>

#include "nsk/core.hpp"

namespace nsk {

struct SolverConfig {
  double dt_initial = 1e-3;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  /// Snapshot cadence in steps; when 0, snapshot_dt is used instead.
  std::size_t snapshot_every = 0;
  /// Snapshot cadence in time units; 0 means "first and last only".
  double snapshot_dt = 0.0;
  /// 1: IMEX Euler. 2: IMEX midpoint (Euler half-step predictor, then a
  /// Crank-Nicolson corrector with midpoint coefficients).
  int scheme_order = 2;
  int max_halvings = 20;

  /// Throws ConfigError.
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct Trajectory {
  std::vector<LagState> snapshots;
  std::vector<double> times;
  std::vector<double> dt_history;
  GasParams params{1.0, 1.0, 1.0, 0.0};
  SolverConfig config;

  std::size_t n() const { return snapshots.empty() ? 0 : snapshots.front().size(); }
  std::size_t size() const { return snapshots.size(); }
  const LagState& initial() const { return snapshots.front(); }
  const LagState& final() const { return snapshots.back(); }
};

/// One IMEX step. Throws PositivityError if rho or theta loses positivity and
/// LinearSolveError if an implicit system is singular.
LagState step(const LagState& state, double dt, const GasParams& params, int scheme_order = 2);

/// Largest step allowed by the acoustic CFL bound and the explicit
/// compression/heating rate bound, both scaled by cfl_safety.
double stable_dt(const LagState& state, const GasParams& params, double cfl_safety);

/// Integrates to config.t_end. The nominal step T/ceil(T/dt_initial) is
/// sub-cycled when the stability cap is smaller, and halved on positivity
/// loss up to config.max_halvings times before BlowupError.
Trajectory run(const LagState& initial, const GasParams& params, const SolverConfig& config);

/// max over snapshots and cells of |D(X)[j] - rho0[j]/rho[j]|.
double flow_map_consistency(const Trajectory& traj);

/// Same quantity for a single snapshot.
double flow_map_residual(const LagState& state);

using FieldExtractor = std::function<Field(const LagState&)>;

/// Per-label cumulative trapezoid integral of f over the snapshot times: the
/// material antiderivative evaluated along each particle path.
std::vector<Field> material_antiderivative(const Trajectory& traj, const FieldExtractor& f);

}  // namespace nsk
