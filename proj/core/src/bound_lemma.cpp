#include "nsk/bound_lemma.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "nsk/diagnostics.hpp"
#include "nsk/error.hpp"
#include "nsk/ode.hpp"

namespace nsk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMargin = 1e-3;
constexpr double kLadderCeiling = 1e200;
constexpr double kPlateau = 1e-12;

double inv_phi(const ScalarFn& phi, double z) {
  const double v = phi(z);
  if (std::isnan(v) || !(v > 0.0)) {
    throw QuadratureFailure("Phi(" + std::to_string(z) + ") = " + std::to_string(v) +
                            " is not positive");
  }
  return 1.0 / v;  // +inf gives 0, which is fine
}

double integrate_segment(const ScalarFn& phi, double a, double b) {
  if (b <= a) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double z) { return inv_phi(phi, z); }, a, b, 15, 1e-10, &err);
  if (!std::isfinite(v) || !std::isfinite(err)) {
    throw QuadratureFailure("non-finite quadrature of 1/Phi on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "]");
  }
  return v;
}

double ladder_scale(double tau0) { return std::max(std::abs(tau0), 1.0); }

// Ladder nodes tau0, tau0 + s, tau0 + 10 s, ... built until the increments
// plateau or the nodes pass the ceiling.
struct Ladder {
  Field y;
  Field psi;
  double sup = kInf;
};

Ladder build_ladder(const ScalarFn& phi, double tau0) {
  Ladder l;
  l.y.push_back(tau0);
  l.psi.push_back(0.0);
  const double s = ladder_scale(tau0);
  for (double step = s; tau0 + step <= kLadderCeiling; step *= 10.0) {
    const double next = tau0 + step;
    const double inc = integrate_segment(phi, l.y.back(), next);
    l.y.push_back(next);
    l.psi.push_back(l.psi.back() + inc);
    if (inc <= kPlateau * l.psi.back()) {
      l.sup = l.psi.back();
      return l;
    }
  }
  return l;
}

// Psi^{-1}(target) on a ladder whose last value exceeds target.
double invert(const ScalarFn& phi, const Ladder& l, double target) {
  if (target <= 0.0) return l.y.front();
  const auto it = std::lower_bound(l.psi.begin(), l.psi.end(), target);
  if (it == l.psi.end()) return kInf;
  const auto k = static_cast<std::size_t>(it - l.psi.begin());
  double lo = l.y[k - 1];
  double hi = l.y[k];
  const double base = l.psi[k - 1];
  for (int iter = 0; iter < 400 && hi - lo > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (base + integrate_segment(phi, l.y[k - 1], mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ScalarFn reduced_phi(const BoundProblem& p, double growth) {
  if (growth == 1.0) return p.Phi;
  return [phi = p.Phi, growth](double y) { return phi(growth * y); };
}

double integrate_delta(const BoundProblem& p) {
  if (!p.delta) return 0.0;
  if (!p.delta_grid.empty()) {
    double acc = 0.0;
    for (std::size_t k = 1; k < p.delta_grid.size(); ++k) {
      const double a = p.delta_grid[k - 1];
      const double b = p.delta_grid[k];
      acc += 0.5 * (b - a) * (p.delta(a) + p.delta(b));
    }
    return acc;
  }
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(p.delta, 0.0, p.T, 15,
                                                                       1e-12);
}

void check_problem(const BoundProblem& p) {
  if (!p.Phi) throw DomainError("Phi must be provided");
  if (!(p.T > 0.0)) throw DomainError("T > 0 required");
  if (!(p.tau0 >= 0.0)) throw DomainError("tau0 >= 0 required");
}

}  // namespace

double psi(const BoundProblem& problem, double y) {
  check_problem(problem);
  if (y < problem.tau0) throw DomainError("Psi is evaluated only for y >= tau0");
  const double s = ladder_scale(problem.tau0);
  double acc = 0.0;
  double a = problem.tau0;
  for (double step = s; a < y; step *= 10.0) {
    const double b = std::min(problem.tau0 + step, y);
    acc += integrate_segment(problem.Phi, a, b);
    a = b;
  }
  return acc;
}

BoundResult compute_threshold(const BoundProblem& problem) {
  check_problem(problem);
  BoundResult r;
  const double D = std::max(problem.D, 0.0);
  r.growth = std::exp(D * problem.T);
  if (!std::isfinite(r.growth)) throw NotBoundable("e^{DT} overflows");
  const ScalarFn phi = reduced_phi(problem, r.growth);
  const Ladder l = build_ladder(phi, problem.tau0);
  r.ladder_y = l.y;
  r.ladder_psi = l.psi;
  r.sup_psi = l.sup;
  r.int_delta = integrate_delta(problem);
  if (!(r.sup_psi > r.psi_tau0)) {
    throw NotBoundable("sup Psi does not exceed Psi(tau0)");
  }
  if (r.int_delta < 0.0) throw DomainError("delta must be non-negative");
  if (r.int_delta == 0.0) {
    r.tau_bar = problem.tau0 * r.growth;
    return r;
  }
  if (std::isinf(r.sup_psi)) return r;  // kappa0 = tau_bar = +inf; use tau_bar_for
  r.kappa0 = (r.sup_psi - r.psi_tau0) * (1.0 - kMargin) / r.int_delta;
  r.tau_bar = r.growth * invert(phi, l, r.kappa0 * r.int_delta);
  return r;
}

double tau_bar_for(const BoundProblem& problem, const BoundResult& result, double kappa) {
  const double target = kappa * result.int_delta;
  if (target <= 0.0) return problem.tau0 * result.growth;
  if (target >= result.sup_psi) return kInf;
  Ladder l{result.ladder_y, result.ladder_psi, result.sup_psi};
  return result.growth * invert(reduced_phi(problem, result.growth), l, target);
}

std::vector<VerifyRow> verify_bound(const BoundProblem& problem, const BoundResult& result,
                                    const std::vector<double>& kappas) {
  std::vector<VerifyRow> rows;
  rows.reserve(kappas.size());
  for (double kappa : kappas) {
    VerifyRow row;
    row.kappa = kappa;
    row.tau_bar = tau_bar_for(problem, result, kappa);
    row.below_threshold = kappa < result.kappa0;

    double ref = std::max(1.0, problem.tau0);
    if (std::isfinite(result.tau_bar)) ref = std::max(ref, result.tau_bar);
    if (std::isfinite(row.tau_bar)) ref = std::max(ref, row.tau_bar);
    OdeOptions opt;
    opt.rtol = 1e-9;
    opt.atol = 1e-12 * ref;
    opt.blowup_threshold = 1e15 * ref;
    const auto rhs = [&](double t, double tau) {
      const double d = problem.delta ? problem.delta(t) : 0.0;
      return problem.D * tau + kappa * d * problem.Phi(tau);
    };
    const OdeResult ode = integrate_dopri5(rhs, problem.tau0, 0.0, problem.T, opt);
    row.sup_tau = ode.sup_y;
    row.blowup = ode.blowup;
    row.blowup_time = ode.blowup ? ode.blowup_time : 0.0;
    row.pass = !row.blowup && row.sup_tau <= row.tau_bar * (1.0 + 1e-6);
    rows.push_back(row);
  }
  return rows;
}

bool lemma_holds(const std::vector<VerifyRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const VerifyRow& r) { return !r.below_threshold || r.pass; });
}

ScalarFn piecewise_linear(Field times, Field values) {
  if (times.size() != values.size() || times.empty()) {
    throw DomainError("piecewise_linear needs matching, non-empty samples");
  }
  return [t = std::move(times), v = std::move(values)](double x) {
    if (x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const auto k = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[k - 1]) / (t[k] - t[k - 1]);
    return (1.0 - w) * v[k - 1] + w * v[k];
  };
}

ScalarFn hoff_phi(double c1, double c2, double c3, double theta0_bar) {
  return [=](double y) {
    const double a = theta0_bar + c2 * y;
    return c1 * a * a * std::exp(c3 * std::sqrt(std::max(y, 0.0)));
  };
}

PairingRecord pair_with_simulation(const Trajectory& traj, const GasParams& params) {
  const HoffEnergies hoff = hoff_energies(traj, params);
  const ExtremaRecord ext = bounds_report(traj);
  const LagState& s0 = traj.initial();

  PairingRecord rec;
  rec.kappa = params.kappa();
  rec.kappa_lemma = params.kappa() * params.kappa();
  rec.rho_bar = ext.global_rho_max;
  rec.theta0_bar = *std::max_element(s0.theta.begin(), s0.theta.end());
  const double T = traj.times.back();
  const double mu = params.mu();
  const double cv = params.cv();
  const double g1 = params.gamma_minus_one();
  const double m = std::max(2.0, rec.rho_bar / mu);
  rec.c1 = 2.0 * g1 * g1 * rec.rho_bar / mu;
  rec.c2 = m / (mu * rec.rho_bar * cv);
  rec.c3 = 2.0 * params.R() * std::sqrt(m) * std::sqrt(T) / (mu * cv);
  const ScalarFn phi = hoff_phi(rec.c1, rec.c2, rec.c3, rec.theta0_bar);

  Field delta(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const LagState& s = traj.snapshots[k];
    const Field d = deriv(s.theta, s.grid());
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      // (d_X theta)^2 / theta^2 dX = (rho/rho0) (D theta)^2 / theta^2 dx
      acc += (s.rho[j] / s.rho0[j]) * d[j] * d[j] / (s.theta[j] * s.theta[j]);
    }
    delta[k] = acc * s.grid().dx();
  }

  const Field& A2 = hoff.A2;
  const Field dA2 = time_derivative(A2, traj.times);
  double D = 0.0;
  for (std::size_t k = 0; k < A2.size(); ++k) {
    D = std::max(D, (dA2[k] - rec.kappa_lemma * delta[k] * phi(A2[k])) / A2[k]);
  }
  rec.D_eff = D;
  rec.tau0 = A2.front();
  rec.sup_A2 = *std::max_element(A2.begin(), A2.end());

  BoundProblem problem;
  problem.D = D;
  problem.delta = piecewise_linear(traj.times, delta);
  problem.delta_grid = traj.times;
  problem.Phi = phi;
  problem.tau0 = rec.tau0;
  problem.T = T;
  const BoundResult res = compute_threshold(problem);
  rec.int_delta = res.int_delta;
  rec.kappa0 = res.kappa0;
  rec.tau_bar_uniform = res.tau_bar;
  rec.applicable = rec.kappa_lemma < res.kappa0;
  rec.tau_bar = tau_bar_for(problem, res, rec.kappa_lemma);
  rec.margin = std::isfinite(rec.tau_bar) ? 1.0 - rec.sup_A2 / rec.tau_bar : 1.0;
  rec.pass = rec.applicable && rec.sup_A2 <= rec.tau_bar * (1.0 + 1e-6);
  return rec;
}

}  // namespace nsk
