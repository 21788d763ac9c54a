#include "nsk/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nsk/error.hpp"

namespace nsk {
namespace {

InitialFields read_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read initial data file " + path);
  InitialFields f;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ss(line);
    double r = 0.0, u = 0.0, t = 0.0;
    if (!(ss >> r >> u >> t)) {
      throw FormatError("initial data row " + std::to_string(row) + ": expected rho u theta");
    }
    f.rho.push_back(r);
    f.u.push_back(u);
    f.theta.push_back(t);
    ++row;
  }
  if (f.rho.size() != n) {
    throw FormatError("initial data file has " + std::to_string(f.rho.size()) +
                      " rows, grid has " + std::to_string(n));
  }
  return f;
}

void check_bounds(const InitialDataSpec& spec, const InitialFields& f) {
  const auto [rmin, rmax] = std::minmax_element(f.rho.begin(), f.rho.end());
  const auto [tmin, tmax] = std::minmax_element(f.theta.begin(), f.theta.end());
  if (!(*rmin >= spec.rho_lower) || !(*rmax <= spec.rho_upper)) {
    throw ValidationError("density bounds violated: rho0 in [" + format_number(*rmin) + ", " +
                          format_number(*rmax) + "] is not inside [rho_lower, rho_upper]");
  }
  if (!(*tmin >= spec.theta_lower) || !(*tmax <= spec.theta_upper)) {
    throw ValidationError("temperature bounds violated: theta0 in [" + format_number(*tmin) +
                          ", " + format_number(*tmax) +
                          "] is not inside [theta_lower, theta_upper]");
  }
  for (double u : f.u) {
    if (!std::isfinite(u)) throw ValidationError("initial velocity must be finite");
  }
}

}  // namespace

GeneratedData generate_initial(const InitialDataSpec& spec, std::size_t n) {
  const Grid grid(n);
  GeneratedData out;
  InitialFields& f = out.fields;
  if (spec.generator == "file") {
    f = read_file(spec.file, n);
  } else {
    f.rho.assign(n, spec.rho_mean);
    f.u.assign(n, spec.u_mean);
    f.theta.assign(n, spec.theta_mean);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.center(j);
      const double arg = two_pi * (x + spec.phase);
      if (spec.generator == "sine_density" || spec.generator == "sine_all") {
        f.rho[j] += spec.rho_amp * std::sin(arg);
      }
      if (spec.generator == "sine_all" || spec.generator == "sampled_jump") {
        f.u[j] += spec.u_amp * std::sin(arg);
      }
      if (spec.generator == "sine_all") f.theta[j] += spec.theta_amp * std::cos(arg);
      if (spec.generator == "sampled_jump") {
        f.rho[j] = (x >= 0.25 && x < 0.75) ? spec.jump_high : spec.jump_low;
      }
    }
    out.ill_prepared = spec.generator == "sampled_jump";
  }
  check_bounds(spec, f);
  if (spec.normalize_momentum) galilean_normalize(f);
  return out;
}

}  // namespace nsk
