#include "nsk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsk/error.hpp"
#include "nsk/tridiag.hpp"

namespace nsk {
namespace {

// Compact second-difference operator D(c a D f) with face coefficients
// face[j] = c * (a[j] + a[j+1]) / 2 / dx^2 on face j+1/2.
struct FaceDiffusion {
  Field face;

  FaceDiffusion(const Field& a, double coeff, const Grid& grid) : face(a.size()) {
    const std::size_t n = a.size();
    const double scale = coeff * static_cast<double>(grid.n()) * static_cast<double>(grid.n());
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
      face[j] = 0.5 * (a[j] + a[jp]) * scale;
    }
  }

  Field apply(const Field& f) const {
    const std::size_t n = f.size();
    Field out(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
      const std::size_t jm = (j == 0) ? n - 1 : j - 1;
      out[j] = face[j] * (f[jp] - f[j]) - face[jm] * (f[j] - f[jm]);
    }
    return out;
  }

  // Solves (mass - c L) x = rhs.
  Field solve(const Field& mass, double c, const Field& rhs) const {
    const std::size_t n = mass.size();
    Field lower(n), diag(n), upper(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t jm = (j == 0) ? n - 1 : j - 1;
      lower[j] = -c * face[jm];
      upper[j] = -c * face[j];
      diag[j] = mass[j] + c * (face[j] + face[jm]);
    }
    return solve_cyclic_tridiagonal(lower, diag, upper, rhs);
  }
};

// Cell-averaged face dissipation mu a_f ((w[j+1]-w[j])/dx)^2; its sum
// cancels sum_j w_j (L w)_j exactly.
Field viscous_heating(const Field& a, const Field& w, double mu, const Grid& grid) {
  const std::size_t n = w.size();
  const double inv_dx = static_cast<double>(grid.n());
  Field face(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
    const double g = (w[jp] - w[j]) * inv_dx;
    face[j] = mu * 0.5 * (a[j] + a[jp]) * g * g;
  }
  Field h(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = (j == 0) ? n - 1 : j - 1;
    h[j] = 0.5 * (face[j] + face[jm]);
  }
  return h;
}

Field ratio(const Field& num, const Field& den) {
  Field r(num.size());
  for (std::size_t j = 0; j < num.size(); ++j) r[j] = num[j] / den[j];
  return r;
}

Field pressure(const Field& rho, const Field& theta, double R) {
  Field p(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) p[j] = R * rho[j] * theta[j];
  return p;
}

void check_positive(const LagState& s) {
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!(s.rho[j] > 0.0) || !std::isfinite(s.rho[j]) || !(s.theta[j] > 0.0) ||
        !std::isfinite(s.theta[j])) {
      std::ostringstream os;
      os << "positivity lost at cell " << j << " (rho = " << s.rho[j]
         << ", theta = " << s.theta[j] << ")";
      throw PositivityError(os.str());
    }
  }
}

// Shared corrector. `coef` holds the frozen rho/rho0 and pressure, `implicit`
// is 1 for backward Euler and 1/2 for Crank-Nicolson, `rho_rate` is the
// density used in the rho^2 D(u) compression term.
struct Frozen {
  Field a;
  Field p;
  Field rho_rate;
};

LagState advance(const LagState& s, double dt, const GasParams& params, const Frozen& frozen,
                 double implicit) {
  const Grid grid = s.grid();
  const std::size_t n = s.size();

  // Momentum: (rho0 - c L) du = dt (L u - D p).
  const FaceDiffusion visc(frozen.a, params.mu(), grid);
  const Field lu = visc.apply(s.u);
  const Field dp = deriv(frozen.p, grid);
  Field rhs(n);
  for (std::size_t j = 0; j < n; ++j) rhs[j] = dt * (lu[j] - dp[j]);
  const Field du = visc.solve(s.rho0, implicit * dt, rhs);

  LagState out;
  out.t = s.t + dt;
  out.rho0 = s.rho0;
  out.u.resize(n);
  Field w(n);  // velocity carried by the kinematic updates
  for (std::size_t j = 0; j < n; ++j) {
    out.u[j] = s.u[j] + du[j];
    w[j] = s.u[j] + implicit * du[j];
  }

  const Field dw = deriv(w, grid);
  out.rho.resize(n);
  out.x_pos.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = frozen.rho_rate[j];
    out.rho[j] = s.rho[j] - dt * r * r * dw[j] / s.rho0[j];
    out.x_pos[j] = s.x_pos[j] + dt * w[j];
  }

  // Temperature: (rho0 cv - c K) dth = dt (K th + work).
  const Field heat = viscous_heating(frozen.a, w, params.mu(), grid);
  Field work(n);
  for (std::size_t j = 0; j < n; ++j) work[j] = -frozen.p[j] * dw[j] + heat[j];

  out.theta.resize(n);
  if (params.kappa() == 0.0) {
    for (std::size_t j = 0; j < n; ++j) {
      out.theta[j] = s.theta[j] + dt * work[j] / (s.rho0[j] * params.cv());
    }
  } else {
    const FaceDiffusion cond(frozen.a, params.kappa(), grid);
    const Field kth = cond.apply(s.theta);
    Field mass(n);
    for (std::size_t j = 0; j < n; ++j) {
      mass[j] = s.rho0[j] * params.cv();
      rhs[j] = dt * (kth[j] + work[j]);
    }
    const Field dth = cond.solve(mass, implicit * dt, rhs);
    for (std::size_t j = 0; j < n; ++j) out.theta[j] = s.theta[j] + dth[j];
  }

  check_positive(out);
  return out;
}

LagState imex_euler(const LagState& s, double dt, const GasParams& params) {
  Frozen f{ratio(s.rho, s.rho0), pressure(s.rho, s.theta, params.R()), s.rho};
  return advance(s, dt, params, f, 1.0);
}

LagState imex_midpoint(const LagState& s, double dt, const GasParams& params) {
  const LagState mid = imex_euler(s, 0.5 * dt, params);
  Frozen f{ratio(mid.rho, mid.rho0), pressure(mid.rho, mid.theta, params.R()), mid.rho};
  return advance(s, dt, params, f, 0.5);
}

std::string extrema_summary(const LagState& s) {
  const auto [rmin, rmax] = std::minmax_element(s.rho.begin(), s.rho.end());
  const auto [tmin, tmax] = std::minmax_element(s.theta.begin(), s.theta.end());
  std::ostringstream os;
  os << "rho in [" << *rmin << ", " << *rmax << "], theta in [" << *tmin << ", " << *tmax
     << "]";
  return os.str();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(dt_initial > 0.0) || !std::isfinite(dt_initial)) throw ConfigError("dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be > 0");
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0) throw ConfigError("cfl must lie in (0, 1]");
  if (!(snapshot_dt >= 0.0)) throw ConfigError("snapshot_dt must be >= 0");
  if (scheme_order != 1 && scheme_order != 2) throw ConfigError("order must be 1 or 2");
  if (max_halvings < 0) throw ConfigError("max_halvings must be >= 0");
}

LagState step(const LagState& state, double dt, const GasParams& params, int scheme_order) {
  if (!(dt > 0.0)) throw DomainError("step needs dt > 0");
  return scheme_order == 1 ? imex_euler(state, dt, params) : imex_midpoint(state, dt, params);
}

double stable_dt(const LagState& s, const GasParams& params, double cfl_safety) {
  const Grid grid = s.grid();
  const Field du = deriv(s.u, grid);
  double speed = 0.0;
  double rate = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double a = s.rho[j] / s.rho0[j];
    speed = std::max(speed, a * std::sqrt(params.gamma() * params.R() * s.theta[j]));
    const double p = params.R() * s.rho[j] * s.theta[j];
    const double heating = p * std::abs(du[j]) + params.mu() * a * du[j] * du[j];
    rate = std::max(rate, a * std::abs(du[j]));
    rate = std::max(rate, heating / (s.rho0[j] * params.cv() * s.theta[j]));
  }
  double cap = std::numeric_limits<double>::infinity();
  if (speed > 0.0) cap = cfl_safety * grid.dx() / speed;
  if (rate > 0.0) cap = std::min(cap, cfl_safety / rate);
  return cap;
}

Trajectory run(const LagState& initial, const GasParams& params, const SolverConfig& config) {
  config.validate();
  initial.validate();

  const double T = config.t_end;
  const auto steps = static_cast<std::size_t>(
      std::max(1.0, std::ceil(T / config.dt_initial - 1e-9)));
  const double h = T / static_cast<double>(steps);

  std::size_t every = steps;
  if (config.snapshot_every > 0) {
    every = config.snapshot_every;
  } else if (config.snapshot_dt > 0.0) {
    every = static_cast<std::size_t>(std::max(1.0, std::round(config.snapshot_dt / h)));
  }

  Trajectory traj;
  traj.params = params;
  traj.config = config;
  LagState state = initial;
  state.t = 0.0;
  traj.snapshots.push_back(state);
  traj.times.push_back(0.0);

  for (std::size_t i = 0; i < steps; ++i) {
    const double t_target = (i + 1 == steps) ? T : static_cast<double>(i + 1) * h;
    const double cap = stable_dt(state, params, config.cfl_safety);
    double local = t_target - state.t;
    if (cap < local) local = (t_target - state.t) / std::ceil((t_target - state.t) / cap);
    int halvings = 0;
    while (state.t < t_target) {
      double dt = std::min(local, t_target - state.t);
      const bool last = state.t + dt >= t_target - 1e-12 * h;
      if (last) dt = t_target - state.t;
      try {
        LagState next = step(state, dt, params, config.scheme_order);
        next.t = last ? t_target : state.t + dt;
        state = std::move(next);
        traj.dt_history.push_back(dt);
        halvings = 0;
      } catch (const PositivityError&) {
        if (++halvings > config.max_halvings) {
          std::ostringstream os;
          os << "step rejected after " << config.max_halvings << " halvings at t = " << state.t
             << "; " << extrema_summary(state);
          throw BlowupError(os.str());
        }
        local = 0.5 * dt;
      } catch (const LinearSolveError&) {
        if (++halvings > config.max_halvings) {
          std::ostringstream os;
          os << "implicit solve failed after " << config.max_halvings
             << " halvings at t = " << state.t << "; " << extrema_summary(state);
          throw BlowupError(os.str());
        }
        local = 0.5 * dt;
      }
    }
    if ((i + 1) % every == 0 || i + 1 == steps) {
      traj.snapshots.push_back(state);
      traj.times.push_back(state.t);
    }
  }
  return traj;
}

double flow_map_residual(const LagState& s) {
  const Field dX = deriv_lifted(s.x_pos, s.grid());
  double worst = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    worst = std::max(worst, std::abs(dX[j] - s.rho0[j] / s.rho[j]));
  }
  return worst;
}

double flow_map_consistency(const Trajectory& traj) {
  double worst = 0.0;
  for (const LagState& s : traj.snapshots) worst = std::max(worst, flow_map_residual(s));
  return worst;
}

std::vector<Field> material_antiderivative(const Trajectory& traj, const FieldExtractor& f) {
  std::vector<Field> out;
  out.reserve(traj.size());
  Field prev = f(traj.snapshots.front());
  Field acc(prev.size(), 0.0);
  out.push_back(acc);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const Field cur = f(traj.snapshots[k]);
    const double dt = traj.times[k] - traj.times[k - 1];
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += 0.5 * dt * (prev[j] + cur[j]);
    out.push_back(acc);
    prev = cur;
  }
  return out;
}

}  // namespace nsk
