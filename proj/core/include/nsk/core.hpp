#pragma once

// Domain types, ideal-gas closures and discrete operators on the periodic
// label grid. Every field is collocated at cell centres x_j = (j + 1/2)/n of
// the unit torus.
//
// Two derivative flavours exist and are never mixed inside one identity:
//   * deriv()          second-order centred difference, used by the solver's
//                      pressure/transport terms and by every diagnostic;
//   * forward_deriv()  forward difference, the exact left inverse partner of
//                      antideriv() (cumulative sum).

#include <cstddef>
#include <span>
#include <vector>

namespace nsk {

using Field = std::vector<double>;

/// Physical constants of the system. gamma is derived, never stored.
class GasParams {
 public:
  GasParams(double mu, double R, double cv, double kappa);

  double mu() const noexcept { return mu_; }
  double R() const noexcept { return R_; }
  double cv() const noexcept { return cv_; }
  double kappa() const noexcept { return kappa_; }
  double gamma() const noexcept { return R_ / cv_ + 1.0; }
  double gamma_minus_one() const noexcept { return R_ / cv_; }

  GasParams with_kappa(double kappa) const { return GasParams(mu_, R_, cv_, kappa); }

  friend bool operator==(const GasParams&, const GasParams&) = default;

 private:
  double mu_;
  double R_;
  double cv_;
  double kappa_;
};

/// Uniform periodic grid on [0, 1).
class Grid {
 public:
  explicit Grid(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  double dx() const noexcept { return 1.0 / static_cast<double>(n_); }
  double center(std::size_t j) const noexcept {
    return (static_cast<double>(j) + 0.5) / static_cast<double>(n_);
  }
  Field centers() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
};

/// Fields in the Lagrangian label coordinate. x_pos is the particle position
/// X(t, x_j), kept as a continuous lift (not wrapped into [0,1)). rho0 is the
/// reference density, frozen at t = 0.
struct LagState {
  double t = 0.0;
  Field rho;
  Field u;
  Field theta;
  Field x_pos;
  Field rho0;

  std::size_t size() const noexcept { return rho.size(); }
  Grid grid() const { return Grid(rho.size()); }

  /// Throws PositivityError if rho or theta is not strictly positive and
  /// finite, DomainError on inconsistent field sizes or non-finite values.
  void validate() const;

  friend bool operator==(const LagState&, const LagState&) = default;
};

/// Builds the t = 0 state: x_pos at the cell centres and rho0 = rho.
LagState make_initial_state(const Field& rho, const Field& u, const Field& theta);

struct DerivedFields {
  Field p;      ///< R rho theta
  Field e;      ///< cv theta
  Field etot;   ///< u^2/2 + e
  Field s;      ///< cv ln theta - R ln rho
  Field sigma;  ///< mu (rho/rho0) D(u) - R rho theta
};

/// Centred difference (f[j+1] - f[j-1]) / (2 dx), periodic.
Field deriv(std::span<const double> f, const Grid& grid);

/// Forward difference (f[j+1] - f[j]) / dx, periodic.
Field forward_deriv(std::span<const double> f, const Grid& grid);

/// Periodic antiderivative with zero mean: forward_deriv(antideriv(f)) equals
/// f - mean(f), and antideriv(forward_deriv(h)) equals h - mean(h).
Field antideriv(std::span<const double> f, const Grid& grid);

/// Centred difference of a lifted periodic coordinate (X[j+n] = X[j] + 1).
Field deriv_lifted(std::span<const double> x, const Grid& grid);

double mean(std::span<const double> f);

DerivedFields thermo(const LagState& state, const GasParams& params);

/// Cauchy stress in the Lagrangian form only.
Field cauchy_stress(const LagState& state, const GasParams& params);

/// h(x) = x - 1 - ln x; DomainError for x <= 0.
double entropy_h(double x);

}  // namespace nsk
