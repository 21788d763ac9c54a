#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "nsk/core.hpp"
#include "nsk/solver.hpp"

namespace nsk::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  Field field(std::size_t n, double lo, double hi) {
    Field f(n);
    for (auto& v : f) v = uniform(lo, hi);
    return f;
  }
  /// Smooth positive periodic field: a few random Fourier modes around mean.
  Field smooth(std::size_t n, double mean, double amp) {
    const Grid g(n);
    Field f(n, mean);
    for (int k = 1; k <= 3; ++k) {
      const double a = uniform(-amp, amp) / k;
      const double ph = uniform(0.0, kTwoPi);
      for (std::size_t j = 0; j < n; ++j) f[j] += a * std::sin(kTwoPi * k * g.center(j) + ph);
    }
    return f;
  }

 private:
  std::mt19937_64 rng_;
};

inline Field sampled(std::size_t n, double mean, double amp, bool cosine = false) {
  const Grid g(n);
  Field f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = kTwoPi * g.center(j);
    f[j] = mean + amp * (cosine ? std::cos(x) : std::sin(x));
  }
  return f;
}

/// rho = 1 + 0.3 sin, u = u_amp sin, theta = 1 + theta_amp cos.
inline LagState smooth_state(std::size_t n, double u_amp = 0.1, double theta_amp = 0.2) {
  return make_initial_state(sampled(n, 1.0, 0.3), sampled(n, 0.0, u_amp),
                            sampled(n, 1.0, theta_amp, true));
}

inline LagState constant_state(std::size_t n, double rho = 1.0, double theta = 1.0) {
  return make_initial_state(Field(n, rho), Field(n, 0.0), Field(n, theta));
}

inline double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace nsk::test
