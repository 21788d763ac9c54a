#include "nsk/core.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "nsk/error.hpp"

namespace nsk {

GasParams::GasParams(double mu, double R, double cv, double kappa)
    : mu_(mu), R_(R), cv_(cv), kappa_(kappa) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("mu > 0 required");
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("R > 0 required");
  if (!(cv > 0.0) || !std::isfinite(cv)) throw ValidationError("cv > 0 required");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("kappa >= 0 required");
}

Grid::Grid(std::size_t n) : n_(n) {
  if (n < 8) throw ValidationError("grid needs at least 8 cells, got " + std::to_string(n));
}

Field Grid::centers() const {
  Field x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = center(j);
  return x;
}

void LagState::validate() const {
  const std::size_t n = rho.size();
  if (u.size() != n || theta.size() != n || x_pos.size() != n || rho0.size() != n) {
    throw DomainError("LagState fields have inconsistent sizes");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(rho[j] > 0.0) || !std::isfinite(rho[j])) {
      std::ostringstream os;
      os << "density not positive at cell " << j << " (rho = " << rho[j] << ", t = " << t << ")";
      throw PositivityError(os.str());
    }
    if (!(theta[j] > 0.0) || !std::isfinite(theta[j])) {
      std::ostringstream os;
      os << "temperature not positive at cell " << j << " (theta = " << theta[j] << ", t = " << t
         << ")";
      throw PositivityError(os.str());
    }
    if (!std::isfinite(u[j]) || !std::isfinite(x_pos[j])) {
      throw DomainError("non-finite velocity or position at cell " + std::to_string(j));
    }
    if (!(rho0[j] > 0.0)) throw PositivityError("reference density not positive");
  }
}

LagState make_initial_state(const Field& rho, const Field& u, const Field& theta) {
  const Grid grid(rho.size());
  LagState s;
  s.t = 0.0;
  s.rho = rho;
  s.u = u;
  s.theta = theta;
  s.x_pos = grid.centers();
  s.rho0 = rho;
  s.validate();
  return s;
}

Field deriv(std::span<const double> f, const Grid& grid) {
  const std::size_t n = f.size();
  const double inv = 0.5 * static_cast<double>(grid.n());
  Field d(n);
  d[0] = (f[1] - f[n - 1]) * inv;
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) * inv;
  d[n - 1] = (f[0] - f[n - 2]) * inv;
  return d;
}

Field forward_deriv(std::span<const double> f, const Grid& grid) {
  const std::size_t n = f.size();
  const double inv = static_cast<double>(grid.n());
  Field d(n);
  for (std::size_t j = 0; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j]) * inv;
  d[n - 1] = (f[0] - f[n - 1]) * inv;
  return d;
}

double mean(std::span<const double> f) {
  return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
}

Field antideriv(std::span<const double> f, const Grid& grid) {
  const std::size_t n = f.size();
  const double dx = grid.dx();
  const double fbar = mean(f);
  Field g(n);
  g[0] = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) g[j + 1] = g[j] + (f[j] - fbar) * dx;
  const double gbar = mean(g);
  for (double& v : g) v -= gbar;
  return g;
}

Field deriv_lifted(std::span<const double> x, const Grid& grid) {
  const std::size_t n = x.size();
  const double inv = 0.5 * static_cast<double>(grid.n());
  Field d(n);
  d[0] = (x[1] - (x[n - 1] - 1.0)) * inv;
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (x[j + 1] - x[j - 1]) * inv;
  d[n - 1] = ((x[0] + 1.0) - x[n - 2]) * inv;
  return d;
}

Field cauchy_stress(const LagState& state, const GasParams& params) {
  const std::size_t n = state.size();
  const Field du = deriv(state.u, state.grid());
  Field sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    sigma[j] = params.mu() * (state.rho[j] / state.rho0[j]) * du[j] -
               params.R() * state.rho[j] * state.theta[j];
  }
  return sigma;
}

DerivedFields thermo(const LagState& state, const GasParams& params) {
  state.validate();
  const std::size_t n = state.size();
  DerivedFields d;
  d.p.resize(n);
  d.e.resize(n);
  d.etot.resize(n);
  d.s.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    d.p[j] = params.R() * state.rho[j] * state.theta[j];
    d.e[j] = params.cv() * state.theta[j];
    d.etot[j] = 0.5 * state.u[j] * state.u[j] + d.e[j];
    d.s[j] = params.cv() * std::log(state.theta[j]) - params.R() * std::log(state.rho[j]);
  }
  d.sigma = cauchy_stress(state, params);
  return d;
}

double entropy_h(double x) {
  if (!(x > 0.0)) throw DomainError("entropy_h needs x > 0");
  return x - 1.0 - std::log(x);
}

}  // namespace nsk
