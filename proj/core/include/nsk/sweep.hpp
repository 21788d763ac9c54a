#pragma once

// kappa -> 0 limit experiment, initial-data stability probe and the
// trajectory distances they are measured in.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nsk/bound_lemma.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/mollifier.hpp"
#include "nsk/solver.hpp"

namespace nsk {

enum class DistanceNorm {
  kL2L2Rho,
  kL2L2Theta,
  kL2L2U,
  kL2H1U,
  kLagrangianComposed,
};

inline constexpr std::array<DistanceNorm, 5> kAllNorms = {
    DistanceNorm::kL2L2Rho, DistanceNorm::kL2L2Theta, DistanceNorm::kL2L2U, DistanceNorm::kL2H1U,
    DistanceNorm::kLagrangianComposed};

/// "L2L2_rho", "L2L2_theta", "L2L2_u", "L2H1_u", "lagrangian_composed".
std::string norm_name(DistanceNorm norm);
/// Inverse of norm_name; DomainError for unknown names.
DistanceNorm parse_norm(const std::string& name);

/// Distance between two trajectories on the same label grid and snapshot
/// times (GridMismatch otherwise).
///  * L2L2_f: space-time L2 norm of sqrt(w_a) f_a - sqrt(w_b) f_b with the
///    Eulerian weight w = rho0/rho; trapezoid in time. The embedding makes it
///    an exact pseudometric.
///  * L2H1_u: L2L2_u combined with the same distance of d_X u.
///  * lagrangian_composed: sup over t of the label-grid L2 norm of the
///    differences of (rho, theta, u, X). rho0 may differ between a and b.
double trajectory_distance(const Trajectory& a, const Trajectory& b, DistanceNorm norm);

/// Subtracts the mass-weighted mean velocity, so that int rho0 u0 = 0.
void galilean_normalize(InitialFields& data);

enum class DataMode {
  kShared,    ///< every kappa starts from the data prepared at the smallest positive kappa
  kPerKappa,  ///< data prepared at each kappa; the kappa = 0 run uses the base data
};

struct SweepConfig {
  std::vector<double> kappas;  ///< strictly decreasing, last element 0
  InitialFields base;
  GasParams gas{1.0, 1.0, 1.0, 0.0};  ///< kappa is overridden per run
  SolverConfig solver;
  bool mollify = true;
  DataMode data_mode = DataMode::kShared;
  bool normalize_momentum = true;
  std::vector<DistanceNorm> norms{kAllNorms.begin(), kAllNorms.end()};
  /// Extra run compared with the kappa = 0 run for branch-point continuity;
  /// 0 disables it.
  double branch_kappa = 1e-15;
  double alpha = 0.5;
  bool pair_lemma = true;
  std::size_t threads = 0;  ///< 0: hardware concurrency

  /// Throws ValidationError.
  void validate() const;
};

struct RateFit {
  bool degenerate = true;
  double rate = 0.0;
  double intercept = 0.0;
  std::string marker = "degenerate: zero distances";
};

/// Ordinary least squares of log y against log x over the pairs with x > 0.
/// Degenerate when any such y is zero or fewer than two pairs exist.
RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepRow {
  double kappa = 0.0;
  std::array<double, kAllNorms.size()> distance{};  ///< indexed like kAllNorms
  Hoff1 hoff1;
  Hoff2 hoff2;
  double rho_min = 0.0, rho_max = 0.0, theta_min = 0.0, theta_max = 0.0;
  double energy_drift = 0.0;
  WeightedRegularity weighted;
  bool dtinv_applicable = false;
  DtInvSigmaCheck dtinv;
  bool paired = false;
  PairingRecord pairing;
  double sqrt_kappa_max_drho = 0.0;
  double mollifier_envelope = 0.0;
  std::size_t steps = 0;

  double dist(DistanceNorm norm) const { return distance[static_cast<std::size_t>(norm)]; }
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< in kappa order
  std::array<RateFit, kAllNorms.size()> rates{};
  std::array<bool, kAllNorms.size()> monotone{};
  bool degenerate = false;  ///< every distance is zero
  double branch_kappa = 0.0;
  /// Largest of the selected distances between the branch run and kappa = 0.
  double branch_distance = 0.0;
  bool ill_prepared = false;
  std::vector<DistanceNorm> norms;

  const RateFit& rate(DistanceNorm norm) const { return rates[static_cast<std::size_t>(norm)]; }
  bool is_monotone(DistanceNorm norm) const {
    return monotone[static_cast<std::size_t>(norm)];
  }
};

/// Runs every kappa (concurrently), measures distances to the kappa = 0 run
/// and fits the rates. Run failures are rethrown as nsk::Error carrying the
/// original kind and the kappa.
SweepResult kappa_limit_study(const SweepConfig& config);

struct UniformityEntry {
  std::string quantity;
  double reference = 0.0;  ///< value at kappa = 0 (or at the largest kappa, see below)
  double min_value = 0.0;
  double max_value = 0.0;
  bool upper_only = false;  ///< quantity vanishes at kappa = 0
  bool within = false;
};

/// Checks every first and second Hoff term, sup theta and 1/min rho for
/// uniformity within `factor` of the kappa = 0 value. Terms carrying a kappa
/// weight vanish at kappa = 0; they are compared with their value at the
/// largest kappa and bounded from above only.
std::vector<UniformityEntry> kappa_uniformity(const SweepResult& result, double factor = 3.0);

enum class ProbeField { kRho, kU, kTheta };

std::string probe_field_name(ProbeField field);
ProbeField parse_probe_field(const std::string& name);

struct ProbeConfig {
  InitialFields base;
  GasParams gas{1.0, 1.0, 1.0, 0.01};
  SolverConfig solver;
  std::vector<double> sizes;
  ProbeField field = ProbeField::kRho;
  std::size_t threads = 0;
};

struct ProbeRow {
  double eps = 0.0;
  double distance = 0.0;
};

struct ProbeResult {
  ProbeField field = ProbeField::kRho;
  std::vector<ProbeRow> rows;
  RateFit fit;
  double required_exponent = 0.0;
  bool pass = false;
};

/// Smooth perturbation profile: the bump centred at 1/2 with half-width 1/4,
/// scaled to unit maximum.
Field perturbation_profile(std::size_t n);

/// Perturbs one field by eps * profile, runs both and records the
/// lagrangian_composed distance. The fitted exponent must reach 1/3 - 0.05
/// for rho and 1 - 0.05 for u and theta.
ProbeResult stability_probe(const ProbeConfig& config);

}  // namespace nsk
