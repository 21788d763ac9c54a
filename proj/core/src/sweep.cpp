#include "nsk/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "nsk/error.hpp"

namespace nsk {
namespace {

// Calls fn(i) for i in [0, count) on a small pool; the first failure (by
// index) is rethrown after every worker has finished.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Reruns fn, turning a library error into one that names the kappa.
template <typename Fn>
auto annotated(double kappa, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), "kappa = " + fmt(kappa) + ": " + e.what());
  }
}

void check_compatible(const Trajectory& a, const Trajectory& b) {
  if (a.n() != b.n()) {
    throw GridMismatch("grid sizes differ: " + std::to_string(a.n()) + " vs " +
                       std::to_string(b.n()));
  }
  if (a.size() != b.size()) {
    throw GridMismatch("snapshot counts differ: " + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()));
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double ta = a.times[k];
    const double tb = b.times[k];
    if (std::abs(ta - tb) > 1e-12 * std::max(1.0, std::abs(ta))) {
      throw GridMismatch("snapshot times differ at index " + std::to_string(k));
    }
  }
}

// sqrt(rho0/rho) * f
Field embed(const LagState& s, const Field& f) {
  Field out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = std::sqrt(s.rho0[j] / s.rho[j]) * f[j];
  return out;
}

Field dX(const LagState& s, const Field& f) {
  Field d = deriv(f, s.grid());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] *= s.rho[j] / s.rho0[j];
  return d;
}

double sq_diff(const Field& a, const Field& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return acc;
}

double weighted_l2l2(const Trajectory& a, const Trajectory& b,
                     const std::function<Field(const LagState&)>& field) {
  Field per_time(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const LagState& sa = a.snapshots[k];
    const LagState& sb = b.snapshots[k];
    per_time[k] = sq_diff(embed(sa, field(sa)), embed(sb, field(sb))) * sa.grid().dx();
  }
  double acc = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    acc += 0.5 * (a.times[k] - a.times[k - 1]) * (per_time[k] + per_time[k - 1]);
  }
  return acc;
}

double composed(const Trajectory& a, const Trajectory& b) {
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const LagState& sa = a.snapshots[k];
    const LagState& sb = b.snapshots[k];
    const double v = (sq_diff(sa.rho, sb.rho) + sq_diff(sa.theta, sb.theta) +
                      sq_diff(sa.u, sb.u) + sq_diff(sa.x_pos, sb.x_pos)) *
                     sa.grid().dx();
    sup = std::max(sup, v);
  }
  return std::sqrt(sup);
}

double selected_max(const SweepRow& row, const std::vector<DistanceNorm>& norms) {
  double m = 0.0;
  for (DistanceNorm nm : norms) m = std::max(m, row.dist(nm));
  return m;
}

}  // namespace

std::string norm_name(DistanceNorm norm) {
  switch (norm) {
    case DistanceNorm::kL2L2Rho: return "L2L2_rho";
    case DistanceNorm::kL2L2Theta: return "L2L2_theta";
    case DistanceNorm::kL2L2U: return "L2L2_u";
    case DistanceNorm::kL2H1U: return "L2H1_u";
    case DistanceNorm::kLagrangianComposed: return "lagrangian_composed";
  }
  return "?";
}

DistanceNorm parse_norm(const std::string& name) {
  for (DistanceNorm n : kAllNorms) {
    if (norm_name(n) == name) return n;
  }
  throw DomainError("unknown distance norm '" + name + "'");
}

double trajectory_distance(const Trajectory& a, const Trajectory& b, DistanceNorm norm) {
  check_compatible(a, b);
  switch (norm) {
    case DistanceNorm::kL2L2Rho:
      return std::sqrt(weighted_l2l2(a, b, [](const LagState& s) { return s.rho; }));
    case DistanceNorm::kL2L2Theta:
      return std::sqrt(weighted_l2l2(a, b, [](const LagState& s) { return s.theta; }));
    case DistanceNorm::kL2L2U:
      return std::sqrt(weighted_l2l2(a, b, [](const LagState& s) { return s.u; }));
    case DistanceNorm::kL2H1U:
      return std::sqrt(weighted_l2l2(a, b, [](const LagState& s) { return s.u; }) +
                       weighted_l2l2(a, b, [](const LagState& s) { return dX(s, s.u); }));
    case DistanceNorm::kLagrangianComposed:
      return composed(a, b);
  }
  return 0.0;
}

void galilean_normalize(InitialFields& data) {
  double m = 0.0, mom = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    m += data.rho[j];
    mom += data.rho[j] * data.u[j];
  }
  const double v = mom / m;
  for (double& u : data.u) u -= v;
}

void SweepConfig::validate() const {
  if (kappas.empty()) throw ValidationError("kappas must not be empty");
  if (kappas.back() != 0.0) throw ValidationError("kappas must end with 0");
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] >= 0.0) || !std::isfinite(kappas[i])) {
      throw ValidationError("kappas must be finite and >= 0");
    }
    if (i > 0 && !(kappas[i] < kappas[i - 1])) {
      throw ValidationError("kappas must be strictly decreasing");
    }
  }
  if (base.size() == 0 || base.u.size() != base.size() || base.theta.size() != base.size()) {
    throw ValidationError("base initial data must have three fields of equal size");
  }
  if (norms.empty()) throw ValidationError("at least one distance norm is required");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (branch_kappa < 0.0) throw ValidationError("branch_kappa >= 0 required");
  solver.validate();
}

RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  RateFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) continue;
    if (!(y[i] > 0.0)) return fit;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < 2) {
    fit.marker = "degenerate: fewer than two positive points";
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) {
    fit.marker = "degenerate: repeated abscissa";
    return fit;
  }
  fit.degenerate = false;
  fit.rate = sxy / sxx;
  fit.intercept = my - fit.rate * mx;
  fit.marker = "ok";
  return fit;
}

SweepResult kappa_limit_study(const SweepConfig& config) {
  config.validate();
  const std::size_t nk = config.kappas.size();
  const bool with_branch = config.branch_kappa > 0.0;

  double smallest_positive = 0.0;
  for (double k : config.kappas) {
    if (k > 0.0) smallest_positive = k;
  }

  // Data per run; index nk is the branch probe.
  std::vector<PreparedData> data(nk + (with_branch ? 1 : 0));
  for (std::size_t i = 0; i < nk; ++i) {
    const double k = config.kappas[i];
    const double prep_kappa =
        !config.mollify ? 0.0
                        : (config.data_mode == DataMode::kShared ? smallest_positive : k);
    data[i] = annotated(k, [&] { return prepare_data(config.base, prep_kappa); });
    if (config.normalize_momentum) galilean_normalize(data[i].fields);
  }
  if (with_branch) data[nk] = data[nk - 1];

  std::vector<double> run_kappas = config.kappas;
  if (with_branch) run_kappas.push_back(config.branch_kappa);

  std::vector<Trajectory> trajs(run_kappas.size());
  parallel_for(run_kappas.size(), config.threads, [&](std::size_t i) {
    const double k = run_kappas[i];
    trajs[i] = annotated(k, [&] {
      const InitialFields& f = data[i].fields;
      return run(make_initial_state(f.rho, f.u, f.theta), config.gas.with_kappa(k),
                 config.solver);
    });
  });

  const Trajectory& ref = trajs[nk - 1];
  SweepResult result;
  result.norms = config.norms;
  result.rows.resize(nk);
  parallel_for(nk, config.threads, [&](std::size_t i) {
    const double k = config.kappas[i];
    const Trajectory& tr = trajs[i];
    SweepRow& row = result.rows[i];
    annotated(k, [&] {
      row.kappa = k;
      for (std::size_t m = 0; m < kAllNorms.size(); ++m) {
        row.distance[m] = i + 1 == nk ? 0.0 : trajectory_distance(tr, ref, kAllNorms[m]);
      }
      const HoffEnergies h = hoff_energies(tr, tr.params);
      row.hoff1 = h.first;
      row.hoff2 = h.second;
      const ExtremaRecord e = bounds_report(tr);
      row.rho_min = e.global_rho_min;
      row.rho_max = e.global_rho_max;
      row.theta_min = e.global_theta_min;
      row.theta_max = e.global_theta_max;
      row.energy_drift = conserved_integrals(tr).energy_drift;
      row.weighted = weighted_regularity(tr, tr.params, config.alpha);
      try {
        row.dtinv = dtinv_sigma_check(tr, tr.params);
        row.dtinv_applicable = true;
      } catch (const NormalizationError&) {
        row.dtinv_applicable = false;
      }
      if (config.pair_lemma) {
        row.pairing = pair_with_simulation(tr, tr.params);
        row.paired = true;
      }
      row.sqrt_kappa_max_drho = data[i].sqrt_kappa_max_drho;
      row.mollifier_envelope = data[i].envelope;
      row.steps = tr.dt_history.size();
      return 0;
    });
  });

  std::vector<double> ks(config.kappas.begin(), config.kappas.end());
  bool all_zero = true;
  for (std::size_t m = 0; m < kAllNorms.size(); ++m) {
    std::vector<double> d(nk);
    for (std::size_t i = 0; i < nk; ++i) d[i] = result.rows[i].distance[m];
    result.rates[m] = fit_loglog(ks, d);
    bool mono = true;
    for (std::size_t i = 1; i < nk; ++i) mono = mono && d[i] < d[i - 1];
    result.monotone[m] = mono;
  }
  for (const SweepRow& row : result.rows) {
    if (selected_max(row, config.norms) > 0.0) all_zero = false;
    result.ill_prepared = result.ill_prepared || row.weighted.ill_prepared;
  }
  result.degenerate = all_zero;

  if (with_branch) {
    result.branch_kappa = config.branch_kappa;
    SweepRow probe;
    for (std::size_t m = 0; m < kAllNorms.size(); ++m) {
      probe.distance[m] = trajectory_distance(trajs[nk], ref, kAllNorms[m]);
    }
    result.branch_distance = selected_max(probe, config.norms);
  }
  return result;
}

std::vector<UniformityEntry> kappa_uniformity(const SweepResult& result, double factor) {
  struct Quantity {
    const char* name;
    double (*get)(const SweepRow&);
    bool kappa_weighted;
  };
  static const Quantity quantities[] = {
      {"hoff1.sup_int_sigma_sq", [](const SweepRow& r) { return r.hoff1.sup_int_sigma_sq; },
       false},
      {"hoff1.sup_int_dxu_sq", [](const SweepRow& r) { return r.hoff1.sup_int_dxu_sq; }, false},
      {"hoff1.kappa_int_int_dxtheta_sq",
       [](const SweepRow& r) { return r.hoff1.kappa_int_int_dxtheta_sq; }, true},
      {"hoff1.int_int_dxsigma_sq", [](const SweepRow& r) { return r.hoff1.int_int_dxsigma_sq; },
       false},
      {"hoff1.int_int_dtu_sq", [](const SweepRow& r) { return r.hoff1.int_int_dtu_sq; }, false},
      {"hoff1.int_sup_sigma_sq", [](const SweepRow& r) { return r.hoff1.int_sup_sigma_sq; },
       false},
      {"hoff1.int_sup_dxu_sq", [](const SweepRow& r) { return r.hoff1.int_sup_dxu_sq; }, false},
      {"hoff1.sup_u_sq", [](const SweepRow& r) { return r.hoff1.sup_u_sq; }, false},
      {"hoff2.sup_w_int_dxsigma_sq",
       [](const SweepRow& r) { return r.hoff2.sup_w_int_dxsigma_sq; }, false},
      {"hoff2.sup_w_kappa_int_dxtheta_sq",
       [](const SweepRow& r) { return r.hoff2.sup_w_kappa_int_dxtheta_sq; }, true},
      {"hoff2.int_w_int_dtsigma_sq",
       [](const SweepRow& r) { return r.hoff2.int_w_int_dtsigma_sq; }, false},
      {"hoff2.int_w_int_dx_kappa_dxtheta_sq",
       [](const SweepRow& r) { return r.hoff2.int_w_int_dx_kappa_dxtheta_sq; }, true},
      {"sup_theta", [](const SweepRow& r) { return r.theta_max; }, false},
      {"inv_min_rho", [](const SweepRow& r) { return 1.0 / r.rho_min; }, false},
  };

  std::vector<UniformityEntry> out;
  if (result.rows.empty()) return out;
  for (const Quantity& q : quantities) {
    UniformityEntry e;
    e.quantity = q.name;
    e.upper_only = q.kappa_weighted;
    e.reference = q.kappa_weighted ? q.get(result.rows.front()) : q.get(result.rows.back());
    e.min_value = std::numeric_limits<double>::infinity();
    e.max_value = 0.0;
    bool finite = true;
    for (const SweepRow& r : result.rows) {
      const double v = q.get(r);
      finite = finite && std::isfinite(v);
      e.min_value = std::min(e.min_value, v);
      e.max_value = std::max(e.max_value, v);
    }
    if (q.kappa_weighted) {
      e.within = finite && e.max_value <= factor * e.reference;
    } else {
      e.within = finite && e.max_value <= factor * e.reference &&
                 e.min_value * factor >= e.reference;
    }
    out.push_back(e);
  }
  return out;
}

std::string probe_field_name(ProbeField field) {
  switch (field) {
    case ProbeField::kRho: return "rho";
    case ProbeField::kU: return "u";
    case ProbeField::kTheta: return "theta";
  }
  return "?";
}

ProbeField parse_probe_field(const std::string& name) {
  if (name == "rho") return ProbeField::kRho;
  if (name == "u") return ProbeField::kU;
  if (name == "theta") return ProbeField::kTheta;
  throw DomainError("unknown probe field '" + name + "'");
}

Field perturbation_profile(std::size_t n) {
  const Grid grid(n);
  Field p(n);
  const double peak = bump(0.0);
  for (std::size_t j = 0; j < n; ++j) p[j] = bump((grid.center(j) - 0.5) / 0.25) / peak;
  return p;
}

ProbeResult stability_probe(const ProbeConfig& config) {
  if (config.sizes.empty()) throw ValidationError("stability probe needs perturbation sizes");
  config.solver.validate();
  ProbeResult result;
  result.field = config.field;
  result.required_exponent = config.field == ProbeField::kRho ? 1.0 / 3.0 - 0.05 : 1.0 - 0.05;

  const Field profile = perturbation_profile(config.base.size());
  const std::size_t count = config.sizes.size();
  std::vector<Trajectory> trajs(count + 1);
  parallel_for(count + 1, config.threads, [&](std::size_t i) {
    InitialFields f = config.base;
    if (i < count) {
      const double eps = config.sizes[i];
      Field& target = config.field == ProbeField::kRho ? f.rho
                      : config.field == ProbeField::kU ? f.u
                                                       : f.theta;
      for (std::size_t j = 0; j < target.size(); ++j) target[j] += eps * profile[j];
    }
    trajs[i] = run(make_initial_state(f.rho, f.u, f.theta), config.gas, config.solver);
  });

  std::vector<double> eps(count), dist(count);
  for (std::size_t i = 0; i < count; ++i) {
    eps[i] = config.sizes[i];
    dist[i] = trajectory_distance(trajs[i], trajs[count], DistanceNorm::kLagrangianComposed);
    result.rows.push_back({eps[i], dist[i]});
  }
  result.fit = fit_loglog(eps, dist);
  result.pass = !result.fit.degenerate && result.fit.rate >= result.required_exponent;
  return result;
}

}  // namespace nsk
