#include "nsk/mollifier.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "nsk/error.hpp"

namespace nsk {

double bump(double x) {
  const double q = 1.0 - x * x;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

double bump_mass() {
  static const double z = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double x) { return bump(x); }, -1.0, 1.0, 15, 1e-14);
  return z;
}

double kernel_derivative_l1() { return 2.0 * bump(0.0) / bump_mass(); }

Field sample_kernel(std::size_t n, double eta) {
  const double dx = 1.0 / static_cast<double>(n);
  const auto reach = static_cast<long>(std::floor(eta / dx));
  const auto nn = static_cast<long>(n);
  Field w(n, 0.0);
  for (long m = -reach; m <= reach; ++m) {
    const double v = bump(static_cast<double>(m) * dx / eta);
    if (v == 0.0) continue;
    w[static_cast<std::size_t>(((m % nn) + nn) % nn)] += v;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

Field mollify(const Field& f, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw DomainError("mollifier width must lie in (0, 1], got " + std::to_string(eta));
  }
  const std::size_t n = f.size();
  const double dx = 1.0 / static_cast<double>(n);
  if (eta < 2.0 * dx) {
    throw KernelUnderresolved("width " + std::to_string(eta) + " is below two cells (" +
                              std::to_string(2.0 * dx) + ")");
  }
  const Field w = sample_kernel(n, eta);
  std::vector<std::size_t> support;
  for (std::size_t m = 0; m < n; ++m) {
    if (w[m] != 0.0) support.push_back(m);
  }
  Field out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t m : support) acc += w[m] * f[(j + n - m) % n];
    out[j] = acc;
  }
  return out;
}

PreparedData prepare_data(const InitialFields& base, double kappa) {
  if (kappa < 0.0) throw DomainError("kappa >= 0 required");
  PreparedData out;
  if (kappa == 0.0) {
    out.fields = base;
    return out;
  }
  out.eta_density = std::pow(kappa, 0.25);
  out.eta_velocity = std::sqrt(kappa);
  out.fields.rho = mollify(base.rho, out.eta_density);
  out.fields.theta = mollify(base.theta, out.eta_density);
  out.fields.u = mollify(base.u, out.eta_velocity);

  const Field d = deriv(out.fields.rho, Grid(base.size()));
  double dmax = 0.0;
  for (double v : d) dmax = std::max(dmax, std::abs(v));
  out.sqrt_kappa_max_drho = std::sqrt(kappa) * dmax;
  const double rho_max = *std::max_element(base.rho.begin(), base.rho.end());
  out.envelope = out.eta_density * rho_max * kernel_derivative_l1();
  return out;
}

}  // namespace nsk
