#pragma once

// Periodic mollification of initial data with the bump
//   phi(x) = exp(-1 / (1 - x^2)) / Z  on (-1, 1),   Z = int phi,
// scaled as phi_eta(x) = phi(x / eta) / eta and renormalised after sampling.

#include <cstddef>

#include "nsk/core.hpp"

namespace nsk {

struct InitialFields {
  Field rho;
  Field u;
  Field theta;

  std::size_t size() const noexcept { return rho.size(); }
  friend bool operator==(const InitialFields&, const InitialFields&) = default;
};

/// Unnormalised bump exp(-1/(1-x^2)), zero outside (-1, 1).
double bump(double x);

/// Z = int_{-1}^{1} exp(-1/(1-x^2)) dx.
double bump_mass();

/// ||phi'||_1 of the unit-mass bump (equals 2 phi(0) since phi is unimodal).
double kernel_derivative_l1();

/// Periodic sampled kernel for width eta: weights w[m] for the offset m dx,
/// folded onto the torus and summing to one.
Field sample_kernel(std::size_t n, double eta);

/// Periodic convolution with the sampled kernel. DomainError unless
/// 0 < eta <= 1; KernelUnderresolved when eta < 2 dx.
Field mollify(const Field& f, double eta);

struct PreparedData {
  InitialFields fields;
  double eta_density = 0.0;   ///< kappa^(1/4), used for rho and theta
  double eta_velocity = 0.0;  ///< kappa^(1/2), used for u
  /// sqrt(kappa) * max |D rho|, the measured left side of the envelope.
  double sqrt_kappa_max_drho = 0.0;
  /// kappa^(1/4) * max rho * ||phi'||_1.
  double envelope = 0.0;
};

/// Well-prepared data for conductivity kappa. kappa = 0 returns the base
/// unchanged with zero widths.
PreparedData prepare_data(const InitialFields& base, double kappa);

}  // namespace nsk
