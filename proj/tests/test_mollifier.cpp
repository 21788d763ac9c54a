#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "nsk/error.hpp"
#include "nsk/mollifier.hpp"

using namespace nsk;

namespace {

// Composite Simpson on (-1, 1); the integrand is flat at the ends.
double simpson_bump_mass(int panels) {
  const double h = 2.0 / panels;
  double acc = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double x = -1.0 + i * h;
    const double q = 1.0 - x * x;
    const double v = q > 0.0 ? std::exp(-1.0 / q) : 0.0;
    acc += v * (i == 0 || i == panels ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("bump normalisation") {
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(-1.5) == 0.0);
  CHECK(bump(0.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(bump_mass() == doctest::Approx(simpson_bump_mass(200000)).epsilon(1e-12));
  CHECK(kernel_derivative_l1() == doctest::Approx(2.0 * std::exp(-1.0) / simpson_bump_mass(200000)));
}

TEST_CASE("sampled kernel is a symmetric probability vector") {
  for (std::size_t n : {32u, 100u, 256u}) {
    for (double eta : {0.05, 0.2, 0.6}) {
      const Field w = sample_kernel(n, eta);
      double total = 0.0;
      for (double v : w) {
        CHECK(v >= 0.0);
        total += v;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
      for (std::size_t m = 1; m < n; ++m) CHECK(w[m] == doctest::Approx(w[n - m]).epsilon(1e-14));
    }
  }
}

TEST_CASE("mollification preserves mean and envelope (property)") {
  test::Gen gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen.index(16, 300);
    const Field f = gen.field(n, -3.0, 5.0);
    const double eta = gen.uniform(2.0 / n, 1.0);
    const Field g = mollify(f, eta);
    CHECK(mean(g) == doctest::Approx(mean(f)).epsilon(1e-12).scale(1.0));
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    for (double v : g) {
      CHECK(v >= *lo - 1e-12);
      CHECK(v <= *hi + 1e-12);
    }
  }
}

TEST_CASE("a Fourier mode is damped by the kernel's cosine transform") {
  const std::size_t n = 128;
  const double eta = 0.1;
  const Field w = sample_kernel(n, eta);
  double factor = 0.0;
  for (std::size_t m = 0; m < n; ++m) factor += w[m] * std::cos(test::kTwoPi * m / n);
  const Field f = test::sampled(n, 0.0, 1.0);
  const Field g = mollify(f, eta);
  for (std::size_t j = 0; j < n; ++j) CHECK(g[j] == doctest::Approx(factor * f[j]).scale(1.0).epsilon(1e-13));
  CHECK(factor < 1.0);
  CHECK(factor > 0.9);
}

TEST_CASE("mollifier width is validated") {
  const Field f(64, 1.0);
  CHECK_THROWS_AS(mollify(f, 0.0), DomainError);
  CHECK_THROWS_AS(mollify(f, 1.5), DomainError);
  CHECK_THROWS_AS(mollify(f, 1.0 / 64), KernelUnderresolved);
  CHECK_NOTHROW(mollify(f, 2.0 / 64));
  const Field c = mollify(f, 0.3);
  for (double v : c) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("prepared data") {
  const std::size_t n = 256;
  const InitialFields base{test::sampled(n, 1.0, 0.3), test::sampled(n, 0.0, 0.1),
                           test::sampled(n, 1.0, 0.2, true)};
  const auto zero = prepare_data(base, 0.0);
  CHECK(zero.fields == base);
  CHECK(zero.eta_density == 0.0);

  const auto p = prepare_data(base, 1e-2);
  CHECK(p.eta_density == doctest::Approx(std::pow(1e-2, 0.25)));
  CHECK(p.eta_velocity == doctest::Approx(0.1));
  CHECK(p.sqrt_kappa_max_drho <= p.envelope);
  CHECK(mean(p.fields.rho) == doctest::Approx(mean(base.rho)).epsilon(1e-13));
  CHECK_THROWS_AS(prepare_data(base, -1.0), DomainError);
}
