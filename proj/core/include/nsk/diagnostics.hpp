#pragma once

// Functionals and identity residuals evaluated on a Trajectory.
//
// Conventions:
//  * Eulerian integrals are computed on the label grid through the change of
//    variables  int g dX = sum_j g_j (rho0_j / rho_j) dx  and Eulerian
//    derivatives as  d_X f = (rho/rho0) D(f)  with the centred D.
//  * Per-label time derivatives use three-point differences on the snapshot
//    times (centred inside, one-sided second order at both ends). Residual
//    maxima quoted for convergence studies use interior snapshots only.
//  * Sup-norms are grid maxima.

#include <vector>

#include "nsk/core.hpp"
#include "nsk/solver.hpp"

namespace nsk {

struct ConservedSeries {
  Field mass;      ///< sum rho0 dx
  Field energy;    ///< sum rho0 (u^2/2 + cv theta) dx
  Field momentum;  ///< sum rho0 u dx
  double mass_drift = 0.0;      ///< max |M(t) - M(0)| / M(0)
  double energy_drift = 0.0;    ///< max |E(t) - E(0)| / E(0)
  double momentum_drift = 0.0;  ///< max |m(t) - m(0)| / sqrt(2 M E)
};

ConservedSeries conserved_integrals(const Trajectory& traj);

struct EntropyBalance {
  Field entropy;     ///< sum rho0 s dx
  Field rate;        ///< instantaneous dissipation  int mu (d_X u)^2/theta + kappa (d_X theta)^2/theta^2 dX
  Field production;  ///< cumulative trapezoid of rate
  Field residual;    ///< |d/dt entropy - rate|
};

EntropyBalance entropy_balance(const Trajectory& traj, const GasParams& params);

enum class StressVariant {
  kPhysical,
  kFlippedPressure,  ///< mu (rho/rho0) D(u) + R rho theta; negative control only
};

/// Discrete L2 (Eulerian measure) norm, per snapshot, of the residual of the
/// stress equation
///   D_t sigma - mu d_X(d_X sigma / rho) + gamma sigma d_X u + (gamma-1) d_X(kappa d_X theta).
Field sigma_pde_residual(const Trajectory& traj, const GasParams& params,
                         StressVariant variant = StressVariant::kPhysical);

/// Residual of the p^(1/gamma) balance, realised in label form as
///   rho D_t(q/rho) - (gamma-1)/gamma [mu (d_X u)^2 + d_X(kappa d_X theta)] q / p,
/// q = p^(1/gamma). With include_conduction = false the kappa term is dropped.
Field pgamma_identity_residual(const Trajectory& traj, const GasParams& params,
                               bool include_conduction = true);

struct Hoff1 {
  double sup_int_sigma_sq = 0.0;
  double sup_int_dxu_sq = 0.0;
  double kappa_int_int_dxtheta_sq = 0.0;
  double int_int_dxsigma_sq = 0.0;
  double int_int_dtu_sq = 0.0;
  double int_sup_sigma_sq = 0.0;
  double int_sup_dxu_sq = 0.0;
  double sup_u_sq = 0.0;
};

struct Hoff2 {
  double sup_w_int_dxsigma_sq = 0.0;
  double sup_w_kappa_int_dxtheta_sq = 0.0;
  double int_w_int_dtsigma_sq = 0.0;
  double int_w_int_dx_kappa_dxtheta_sq = 0.0;
};

struct HoffEnergies {
  Hoff1 first;
  Hoff2 second;
  Field int_sigma_sq;  ///< int sigma^2 dX per snapshot
  Field A1;            ///< int sigma^2 + mu int_0^t int (d_X sigma)^2 / rho
  Field A2;            ///< A1 + int_0^t A1
};

/// time_weight(t) = min(1, t).
double time_weight(double t);

HoffEnergies hoff_energies(const Trajectory& traj, const GasParams& params,
                           double (*weight)(double) = &time_weight);

struct ExtremaRecord {
  Field rho_min, rho_max, theta_min, theta_max;
  double global_rho_min = 0.0, global_rho_max = 0.0;
  double global_theta_min = 0.0, global_theta_max = 0.0;
};

ExtremaRecord bounds_report(const Trajectory& traj);

struct WeightedRegularity {
  double alpha = 0.5;
  double sup_kalpha_int_dxtheta_sq = 0.0;
  double sup_kalpha_int_dxrho_sq = 0.0;
  double kalpha_m1_int_int_dx_kappa_dxtheta_sq = 0.0;
  double sup_kappa_int_dxtheta_sq = 0.0;
  double sup_kappa_max_dxrho_sq = 0.0;
  double sup_kappa_max_dxtheta_sq = 0.0;
  /// kappa^alpha (int (theta0')^2 + int (rho0')^2) on the initial data.
  double data_weighted_norm = 0.0;
  /// Ratio of int (rho0')^2 + int (theta0')^2 on the grid to the same quantity
  /// on the pair-averaged half grid. About 1 for resolved data, about 2 for
  /// grid-scale jumps.
  double data_resolution_ratio = 1.0;
  bool ill_prepared = false;
};

WeightedRegularity weighted_regularity(const Trajectory& traj, const GasParams& params,
                                       double alpha);

/// Resolution ratio of the derivative energy of a single field (see above).
double derivative_resolution_ratio(const Field& f);

struct DtInvSigmaCheck {
  double max_abs = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Compares max |D_t^{-1} sigma| with 2 sqrt(2 M E) + T (gamma+1) E. Needs a
/// zero-mean momentum; otherwise throws NormalizationError.
DtInvSigmaCheck dtinv_sigma_check(const Trajectory& traj, const GasParams& params,
                                  double slack = 0.05);

struct DiagnosticsReport {
  Field times;
  ConservedSeries conserved;
  Field pressure_int;  ///< int p dX
  Field kinetic_int;   ///< int rho u^2 / 2 dX
  EntropyBalance entropy;
  ExtremaRecord extrema;
  HoffEnergies hoff;
  Field sigma_pde_residual;
  Field pgamma_residual;
  Field flow_map_residual;
  Field eulerian_length;  ///< sum rho0/rho dx
  bool dtinv_applicable = false;
  DtInvSigmaCheck dtinv;
  WeightedRegularity weighted;
};

/// Evaluates everything above. Needs at least three snapshots.
DiagnosticsReport evaluate(const Trajectory& traj, double alpha = 0.5);

/// Max over the interior entries (drops first and last).
double max_interior(const Field& series);

/// d/dt of a scalar series on (possibly non-uniform) times, three-point stencils.
Field time_derivative(const Field& values, const Field& times);

/// Cumulative trapezoid integral, starting at 0.
Field cumulative_trapezoid(const Field& values, const Field& times);

}  // namespace nsk
