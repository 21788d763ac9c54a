#pragma once

// Comparison lemma for  tau' <= D tau + kappa delta(t) Phi(tau),  tau(0) = tau0.
//
// With Psi the primitive of 1/Phi normalised by Psi(tau0) = 0, every kappa
// with kappa int delta < sup Psi keeps tau below Psi^{-1}(kappa int delta)
// when D = 0. D > 0 is reduced to D = 0 through Phi~(y) = Phi(e^{DT} y) and
// the bound is scaled back by e^{DT}.

#include <functional>
#include <limits>
#include <vector>

#include "nsk/core.hpp"
#include "nsk/solver.hpp"

namespace nsk {

using ScalarFn = std::function<double(double)>;

struct BoundProblem {
  double D = 0.0;  ///< negative values are treated as 0 (still an upper bound)
  ScalarFn delta;  ///< delta(t) >= 0 on [0, T]
  /// Optional quadrature grid for delta. When non-empty, int delta is the
  /// trapezoid sum over these nodes (exact for piecewise-linear delta);
  /// otherwise adaptive quadrature on [0, T].
  Field delta_grid;
  ScalarFn Phi;  ///< positive, non-decreasing
  double tau0 = 0.0;
  double T = 1.0;
};

struct BoundResult {
  double kappa0 = std::numeric_limits<double>::infinity();
  double tau_bar = std::numeric_limits<double>::infinity();  ///< uniform bound for kappa < kappa0
  double psi_tau0 = 0.0;
  double int_delta = 0.0;
  double sup_psi = std::numeric_limits<double>::infinity();  ///< of the reduced problem
  double growth = 1.0;  ///< e^{DT}
  /// Evaluation ladder of the reduced Psi (y values and Psi values).
  Field ladder_y;
  Field ladder_psi;
};

/// Psi(y) = int_{tau0}^{y} dz / Phi(z) (no D reduction). DomainError for
/// y < tau0, QuadratureFailure when Phi is not positive and finite.
double psi(const BoundProblem& problem, double y);

/// Builds kappa0 and the uniform bound. NotBoundable if sup Psi <= Psi(tau0).
BoundResult compute_threshold(const BoundProblem& problem);

/// tau_bar for one kappa: e^{DT} Psi~^{-1}(kappa int delta); +inf when
/// kappa int delta >= sup Psi~.
double tau_bar_for(const BoundProblem& problem, const BoundResult& result, double kappa);

struct VerifyRow {
  double kappa = 0.0;
  double sup_tau = 0.0;
  double tau_bar = 0.0;  ///< tau_bar_for(kappa)
  bool below_threshold = false;
  bool pass = false;  ///< no blow-up and sup_tau <= tau_bar (1 + 1e-6)
  bool blowup = false;
  double blowup_time = 0.0;
};

/// Integrates the equality ODE for every kappa (DOPRI5, rtol 1e-9).
std::vector<VerifyRow> verify_bound(const BoundProblem& problem, const BoundResult& result,
                                    const std::vector<double>& kappas);

/// True when every row below the threshold passes.
bool lemma_holds(const std::vector<VerifyRow>& rows);

/// Linear interpolation through (times, values), constant outside.
ScalarFn piecewise_linear(Field times, Field values);

struct PairingRecord {
  double kappa = 0.0;
  double kappa_lemma = 0.0;  ///< kappa^2, the parameter entering the lemma
  double D_eff = 0.0;
  double rho_bar = 0.0;
  double theta0_bar = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double int_delta = 0.0;
  double kappa0 = 0.0;
  double tau0 = 0.0;
  double tau_bar = 0.0;          ///< bound for this kappa
  double tau_bar_uniform = 0.0;  ///< bound for all kappa^2 < kappa0
  double sup_A2 = 0.0;
  double margin = 0.0;  ///< 1 - sup A2 / tau_bar
  bool applicable = false;  ///< kappa^2 < kappa0
  bool pass = false;
};

/// Phi(y) = c1 (theta0_bar + c2 y)^2 exp(c3 sqrt(y)) with coefficients from
/// measured run quantities.
ScalarFn hoff_phi(double c1, double c2, double c3, double theta0_bar);

/// Compares the run's A2(t) with the comparison-lemma bound. delta(t) is
/// int (d_X theta)^2 / theta^2 dX; D is the smallest constant for which the
/// sampled A2 is a subsolution.
PairingRecord pair_with_simulation(const Trajectory& traj, const GasParams& params);

}  // namespace nsk
