#include "nsk/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "nsk/error.hpp"

namespace nsk {
namespace {

void require_snapshots(const Trajectory& traj, std::size_t count, const char* what) {
  if (traj.size() < count) {
    throw InsufficientSnapshots(std::string(what) + " needs at least " + std::to_string(count) +
                                " snapshots, trajectory has " + std::to_string(traj.size()));
  }
}

// Three-point derivative weights written on first differences so that
// constant sequences give exactly zero.
double derivative_at(std::size_t k, std::size_t count, const Field& times, double f_prev2,
                     double f_prev, double f_cur, double f_next, double f_next2) {
  if (k == 0) {
    const double h1 = times[1] - times[0];
    const double h2 = times[2] - times[1];
    const double d1 = (f_next - f_cur) / h1;
    const double d2 = (f_next2 - f_next) / h2;
    return d1 - h1 * (d2 - d1) / (h1 + h2);
  }
  if (k + 1 == count) {
    const double h1 = times[k - 1] - times[k - 2];
    const double h2 = times[k] - times[k - 1];
    const double d1 = (f_prev - f_prev2) / h1;
    const double d2 = (f_cur - f_prev) / h2;
    return d2 + h2 * (d2 - d1) / (h1 + h2);
  }
  const double h1 = times[k] - times[k - 1];
  const double h2 = times[k + 1] - times[k];
  const double d1 = (f_cur - f_prev) / h1;
  const double d2 = (f_next - f_cur) / h2;
  return (h2 * d1 + h1 * d2) / (h1 + h2);
}

// Per-label time derivative of a field series at snapshot k.
Field label_time_derivative(const std::vector<Field>& series, const Field& times, std::size_t k) {
  const std::size_t count = series.size();
  const std::size_t n = series[k].size();
  Field out(n);
  auto at = [&](std::ptrdiff_t idx, std::size_t j) {
    if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(count)) return 0.0;
    return series[static_cast<std::size_t>(idx)][j];
  };
  const auto kk = static_cast<std::ptrdiff_t>(k);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = derivative_at(k, count, times, at(kk - 2, j), at(kk - 1, j), series[k][j],
                           at(kk + 1, j), at(kk + 2, j));
  }
  return out;
}

// Geometry of one snapshot shared by most functionals.
struct Geometry {
  Field a;  // rho / rho0
  Field w;  // rho0 / rho
  double dx;

  explicit Geometry(const LagState& s) : a(s.size()), w(s.size()), dx(s.grid().dx()) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      a[j] = s.rho[j] / s.rho0[j];
      w[j] = s.rho0[j] / s.rho[j];
    }
  }

  Field dX(const Field& f) const {
    Field d = deriv(f, Grid(f.size()));
    for (std::size_t j = 0; j < d.size(); ++j) d[j] *= a[j];
    return d;
  }

  // int g dX
  double integral(const Field& g) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += g[j] * w[j];
    return acc * dx;
  }

  double integral_sq(const Field& g) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += g[j] * g[j] * w[j];
    return acc * dx;
  }
};

double max_sq(const Field& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, v * v);
  return m;
}

double trapezoid(const Field& values, const Field& times) {
  double acc = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    acc += 0.5 * (times[k] - times[k - 1]) * (values[k] + values[k - 1]);
  }
  return acc;
}

double max_of(const Field& f) { return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end()); }

Field stress(const LagState& s, const GasParams& params, StressVariant variant) {
  if (variant == StressVariant::kPhysical) return cauchy_stress(s, params);
  const Field du = deriv(s.u, s.grid());
  Field sigma(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    sigma[j] = params.mu() * (s.rho[j] / s.rho0[j]) * du[j] + params.R() * s.rho[j] * s.theta[j];
  }
  return sigma;
}

// d_X(kappa d_X theta)
Field conduction_divergence(const Geometry& g, const Field& theta, double kappa) {
  Field flux = g.dX(theta);
  for (double& v : flux) v *= kappa;
  return g.dX(flux);
}

}  // namespace

double time_weight(double t) { return std::min(1.0, t); }

Field time_derivative(const Field& values, const Field& times) {
  const std::size_t count = values.size();
  if (count < 3) throw InsufficientSnapshots("time derivative needs at least 3 samples");
  Field out(count);
  auto at = [&](std::ptrdiff_t idx) {
    if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(count)) return 0.0;
    return values[static_cast<std::size_t>(idx)];
  };
  for (std::size_t k = 0; k < count; ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    out[k] = derivative_at(k, count, times, at(kk - 2), at(kk - 1), values[k], at(kk + 1),
                           at(kk + 2));
  }
  return out;
}

Field cumulative_trapezoid(const Field& values, const Field& times) {
  Field out(values.size(), 0.0);
  for (std::size_t k = 1; k < values.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * (times[k] - times[k - 1]) * (values[k] + values[k - 1]);
  }
  return out;
}

double max_interior(const Field& series) {
  double m = 0.0;
  for (std::size_t k = 1; k + 1 < series.size(); ++k) m = std::max(m, series[k]);
  return m;
}

ConservedSeries conserved_integrals(const Trajectory& traj) {
  ConservedSeries c;
  const double cv = traj.params.cv();
  for (const LagState& s : traj.snapshots) {
    const double dx = s.grid().dx();
    double m = 0.0, e = 0.0, mom = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      m += s.rho0[j];
      e += s.rho0[j] * (0.5 * s.u[j] * s.u[j] + cv * s.theta[j]);
      mom += s.rho0[j] * s.u[j];
    }
    c.mass.push_back(m * dx);
    c.energy.push_back(e * dx);
    c.momentum.push_back(mom * dx);
  }
  const double m0 = c.mass.front();
  const double e0 = c.energy.front();
  const double p0 = c.momentum.front();
  const double scale = std::sqrt(2.0 * m0 * e0);
  for (std::size_t k = 0; k < c.mass.size(); ++k) {
    c.mass_drift = std::max(c.mass_drift, std::abs(c.mass[k] - m0) / m0);
    c.energy_drift = std::max(c.energy_drift, std::abs(c.energy[k] - e0) / std::abs(e0));
    c.momentum_drift = std::max(c.momentum_drift, std::abs(c.momentum[k] - p0) / scale);
  }
  return c;
}

EntropyBalance entropy_balance(const Trajectory& traj, const GasParams& params) {
  require_snapshots(traj, 3, "entropy_balance");
  EntropyBalance eb;
  for (const LagState& s : traj.snapshots) {
    const Geometry g(s);
    double S = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      S += s.rho0[j] * (params.cv() * std::log(s.theta[j]) - params.R() * std::log(s.rho[j]));
    }
    eb.entropy.push_back(S * g.dx);

    const Field dxu = g.dX(s.u);
    const Field dxth = g.dX(s.theta);
    Field integrand(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      integrand[j] = params.mu() * dxu[j] * dxu[j] / s.theta[j] +
                     params.kappa() * dxth[j] * dxth[j] / (s.theta[j] * s.theta[j]);
    }
    eb.rate.push_back(g.integral(integrand));
  }
  eb.production = cumulative_trapezoid(eb.rate, traj.times);
  const Field dS = time_derivative(eb.entropy, traj.times);
  eb.residual.resize(dS.size());
  for (std::size_t k = 0; k < dS.size(); ++k) eb.residual[k] = std::abs(dS[k] - eb.rate[k]);
  return eb;
}

Field sigma_pde_residual(const Trajectory& traj, const GasParams& params, StressVariant variant) {
  require_snapshots(traj, 3, "sigma_pde_residual");
  std::vector<Field> sigmas;
  sigmas.reserve(traj.size());
  for (const LagState& s : traj.snapshots) sigmas.push_back(stress(s, params, variant));

  const double gamma = params.gamma();
  Field out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const LagState& s = traj.snapshots[k];
    const Geometry g(s);
    const Grid grid = s.grid();
    const Field& sigma = sigmas[k];
    const Field dt_sigma = label_time_derivative(sigmas, traj.times, k);

    Field flux = deriv(sigma, grid);  // d_X sigma / rho = D(sigma) / rho0
    for (std::size_t j = 0; j < flux.size(); ++j) flux[j] /= s.rho0[j];
    const Field viscous = g.dX(flux);
    const Field dxu = g.dX(s.u);
    const Field cond = conduction_divergence(g, s.theta, params.kappa());

    Field r(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      r[j] = dt_sigma[j] - params.mu() * viscous[j] + gamma * sigma[j] * dxu[j] +
             (gamma - 1.0) * cond[j];
    }
    out[k] = std::sqrt(g.integral_sq(r));
  }
  return out;
}

Field pgamma_identity_residual(const Trajectory& traj, const GasParams& params,
                               bool include_conduction) {
  require_snapshots(traj, 3, "pgamma_identity_residual");
  const double gamma = params.gamma();
  const double inv_gamma = 1.0 / gamma;
  std::vector<Field> q_over_rho;
  q_over_rho.reserve(traj.size());
  for (const LagState& s : traj.snapshots) {
    Field v(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      v[j] = std::pow(params.R() * s.rho[j] * s.theta[j], inv_gamma) / s.rho[j];
    }
    q_over_rho.push_back(std::move(v));
  }

  Field out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const LagState& s = traj.snapshots[k];
    const Geometry g(s);
    const Field dt_q = label_time_derivative(q_over_rho, traj.times, k);
    const Field dxu = g.dX(s.u);
    Field cond(s.size(), 0.0);
    if (include_conduction) cond = conduction_divergence(g, s.theta, params.kappa());

    Field r(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double p = params.R() * s.rho[j] * s.theta[j];
      const double q = q_over_rho[k][j] * s.rho[j];
      const double source = (gamma - 1.0) / gamma *
                            (params.mu() * dxu[j] * dxu[j] + cond[j]) * q / p;
      r[j] = s.rho[j] * dt_q[j] - source;
    }
    out[k] = std::sqrt(g.integral_sq(r));
  }
  return out;
}

HoffEnergies hoff_energies(const Trajectory& traj, const GasParams& params,
                           double (*weight)(double)) {
  require_snapshots(traj, 3, "hoff_energies");
  const std::size_t count = traj.size();
  std::vector<Field> sigmas, us;
  sigmas.reserve(count);
  us.reserve(count);
  for (const LagState& s : traj.snapshots) {
    sigmas.push_back(cauchy_stress(s, params));
    us.push_back(s.u);
  }

  HoffEnergies h;
  Field int_dxu_sq(count), int_dxth_sq(count), int_dxsigma_sq(count), int_dtu_sq(count);
  Field sup_sigma_sq(count), sup_dxu_sq(count), int_dtsigma_sq(count), int_dcond_sq(count);
  Field dissipation(count);  // int (d_X sigma)^2 / rho dX
  h.int_sigma_sq.resize(count);

  for (std::size_t k = 0; k < count; ++k) {
    const LagState& s = traj.snapshots[k];
    const Geometry g(s);
    const Field& sigma = sigmas[k];
    const Field dxu = g.dX(s.u);
    const Field dxth = g.dX(s.theta);
    const Field dxsigma = g.dX(sigma);
    const Field dcond = conduction_divergence(g, s.theta, params.kappa());

    // Eulerian time derivatives from the material ones: d_t f = D_t f - u d_X f.
    Field dtu = label_time_derivative(us, traj.times, k);
    Field dtsigma = label_time_derivative(sigmas, traj.times, k);
    Field scaled(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      dtu[j] -= s.u[j] * dxu[j];
      dtsigma[j] -= s.u[j] * dxsigma[j];
      scaled[j] = dxsigma[j] * dxsigma[j] / s.rho[j];
    }

    h.int_sigma_sq[k] = g.integral_sq(sigma);
    int_dxu_sq[k] = g.integral_sq(dxu);
    int_dxth_sq[k] = g.integral_sq(dxth);
    int_dxsigma_sq[k] = g.integral_sq(dxsigma);
    int_dtu_sq[k] = g.integral_sq(dtu);
    int_dtsigma_sq[k] = g.integral_sq(dtsigma);
    int_dcond_sq[k] = g.integral_sq(dcond);
    sup_sigma_sq[k] = max_sq(sigma);
    sup_dxu_sq[k] = max_sq(dxu);
    dissipation[k] = g.integral(scaled);
    h.first.sup_u_sq = std::max(h.first.sup_u_sq, max_sq(s.u));
  }

  const Field& t = traj.times;
  Hoff1& a = h.first;
  a.sup_int_sigma_sq = max_of(h.int_sigma_sq);
  a.sup_int_dxu_sq = max_of(int_dxu_sq);
  a.kappa_int_int_dxtheta_sq = params.kappa() * trapezoid(int_dxth_sq, t);
  a.int_int_dxsigma_sq = trapezoid(int_dxsigma_sq, t);
  a.int_int_dtu_sq = trapezoid(int_dtu_sq, t);
  a.int_sup_sigma_sq = trapezoid(sup_sigma_sq, t);
  a.int_sup_dxu_sq = trapezoid(sup_dxu_sq, t);

  Field w_dxsigma(count), w_kdxth(count), w_dtsigma(count), w_dcond(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double wk = weight(t[k]);
    w_dxsigma[k] = wk * int_dxsigma_sq[k];
    w_kdxth[k] = wk * params.kappa() * int_dxth_sq[k];
    w_dtsigma[k] = wk * int_dtsigma_sq[k];
    w_dcond[k] = wk * int_dcond_sq[k];
  }
  Hoff2& b = h.second;
  b.sup_w_int_dxsigma_sq = max_of(w_dxsigma);
  b.sup_w_kappa_int_dxtheta_sq = max_of(w_kdxth);
  b.int_w_int_dtsigma_sq = trapezoid(w_dtsigma, t);
  b.int_w_int_dx_kappa_dxtheta_sq = trapezoid(w_dcond, t);

  const Field cum_dissipation = cumulative_trapezoid(dissipation, t);
  h.A1.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    h.A1[k] = h.int_sigma_sq[k] + params.mu() * cum_dissipation[k];
  }
  const Field cum_A1 = cumulative_trapezoid(h.A1, t);
  h.A2.resize(count);
  for (std::size_t k = 0; k < count; ++k) h.A2[k] = h.A1[k] + cum_A1[k];
  return h;
}

ExtremaRecord bounds_report(const Trajectory& traj) {
  ExtremaRecord e;
  for (const LagState& s : traj.snapshots) {
    const auto [rmin, rmax] = std::minmax_element(s.rho.begin(), s.rho.end());
    const auto [tmin, tmax] = std::minmax_element(s.theta.begin(), s.theta.end());
    e.rho_min.push_back(*rmin);
    e.rho_max.push_back(*rmax);
    e.theta_min.push_back(*tmin);
    e.theta_max.push_back(*tmax);
  }
  e.global_rho_min = *std::min_element(e.rho_min.begin(), e.rho_min.end());
  e.global_rho_max = *std::max_element(e.rho_max.begin(), e.rho_max.end());
  e.global_theta_min = *std::min_element(e.theta_min.begin(), e.theta_min.end());
  e.global_theta_max = *std::max_element(e.theta_max.begin(), e.theta_max.end());
  return e;
}

double derivative_resolution_ratio(const Field& f) {
  const std::size_t n = f.size();
  auto energy = [](const Field& v) {
    const Grid grid(v.size());
    const Field d = deriv(v, grid);
    double acc = 0.0;
    for (double x : d) acc += x * x;
    return acc * grid.dx();
  };
  const double fine = energy(f);
  if (n < 16) return 1.0;
  Field coarse(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) coarse[i] = 0.5 * (f[2 * i] + f[2 * i + 1]);
  const double rough = energy(coarse);
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, v * v);
  if (fine <= 1e-24 * std::max(1.0, scale)) return 1.0;
  return fine / rough;
}

WeightedRegularity weighted_regularity(const Trajectory& traj, const GasParams& params,
                                       double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  WeightedRegularity wr;
  wr.alpha = alpha;

  const LagState& s0 = traj.initial();
  wr.data_resolution_ratio =
      std::max(derivative_resolution_ratio(s0.rho), derivative_resolution_ratio(s0.theta));
  wr.ill_prepared = wr.data_resolution_ratio > 1.5;

  const double kappa = params.kappa();
  if (kappa == 0.0) return wr;
  const double ka = std::pow(kappa, alpha);

  const std::size_t count = traj.size();
  Field dcond_sq(count);
  for (std::size_t k = 0; k < count; ++k) {
    const LagState& s = traj.snapshots[k];
    const Geometry g(s);
    const Field dxth = g.dX(s.theta);
    const Field dxrho = g.dX(s.rho);
    const double th_sq = g.integral_sq(dxth);
    const double rho_sq = g.integral_sq(dxrho);
    if (k == 0) wr.data_weighted_norm = ka * (th_sq + rho_sq);
    wr.sup_kalpha_int_dxtheta_sq = std::max(wr.sup_kalpha_int_dxtheta_sq, ka * th_sq);
    wr.sup_kalpha_int_dxrho_sq = std::max(wr.sup_kalpha_int_dxrho_sq, ka * rho_sq);
    wr.sup_kappa_int_dxtheta_sq = std::max(wr.sup_kappa_int_dxtheta_sq, kappa * th_sq);
    wr.sup_kappa_max_dxrho_sq = std::max(wr.sup_kappa_max_dxrho_sq, kappa * max_sq(dxrho));
    wr.sup_kappa_max_dxtheta_sq = std::max(wr.sup_kappa_max_dxtheta_sq, kappa * max_sq(dxth));
    dcond_sq[k] = g.integral_sq(conduction_divergence(g, s.theta, kappa));
  }
  wr.kalpha_m1_int_int_dx_kappa_dxtheta_sq = ka / kappa * trapezoid(dcond_sq, traj.times);
  return wr;
}

DtInvSigmaCheck dtinv_sigma_check(const Trajectory& traj, const GasParams& params, double slack) {
  const ConservedSeries c = conserved_integrals(traj);
  const double M = c.mass.front();
  const double E = c.energy.front();
  const double scale = std::sqrt(2.0 * M * E);
  if (std::abs(c.momentum.front()) > 1e-9 * scale) {
    throw NormalizationError("initial momentum " + std::to_string(c.momentum.front()) +
                             " is not zero; apply the Galilean shift first");
  }
  const auto integrals = material_antiderivative(
      traj, [&](const LagState& s) { return cauchy_stress(s, params); });
  DtInvSigmaCheck out;
  for (const Field& f : integrals) {
    for (double v : f) out.max_abs = std::max(out.max_abs, std::abs(v));
  }
  const double T = traj.times.back();
  out.bound = 2.0 * std::sqrt(2.0 * M * E) + T * (params.gamma() + 1.0) * E;
  out.pass = out.max_abs <= out.bound * (1.0 + slack);
  return out;
}

DiagnosticsReport evaluate(const Trajectory& traj, double alpha) {
  require_snapshots(traj, 3, "evaluate");
  const GasParams& params = traj.params;
  DiagnosticsReport r;
  r.times = traj.times;
  r.conserved = conserved_integrals(traj);
  for (const LagState& s : traj.snapshots) {
    const Geometry g(s);
    double p = 0.0, kin = 0.0, len = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      p += params.R() * s.rho0[j] * s.theta[j];
      kin += 0.5 * s.rho0[j] * s.u[j] * s.u[j];
      len += g.w[j];
    }
    r.pressure_int.push_back(p * g.dx);
    r.kinetic_int.push_back(kin * g.dx);
    r.eulerian_length.push_back(len * g.dx);
    r.flow_map_residual.push_back(flow_map_residual(s));
  }
  r.entropy = entropy_balance(traj, params);
  r.extrema = bounds_report(traj);
  r.hoff = hoff_energies(traj, params);
  r.sigma_pde_residual = sigma_pde_residual(traj, params);
  r.pgamma_residual = pgamma_identity_residual(traj, params);
  r.weighted = weighted_regularity(traj, params, alpha);
  try {
    r.dtinv = dtinv_sigma_check(traj, params);
    r.dtinv_applicable = true;
  } catch (const NormalizationError&) {
    r.dtinv_applicable = false;
  }
  return r;
}

}  // namespace nsk
