#include "nsk/tridiag.hpp"

#include <cmath>
#include <string>

#include "nsk/error.hpp"

namespace nsk {
namespace {

// Plain Thomas sweep; a, b, c are the sub-, main and super-diagonals.
void thomas(std::span<const double> a, std::span<const double> b, std::span<const double> c,
            std::span<const double> d, std::span<double> x, std::span<double> scratch) {
  const std::size_t n = b.size();
  double beta = b[0];
  if (!(std::abs(beta) > 0.0) || !std::isfinite(beta)) {
    throw LinearSolveError("zero pivot at row 0");
  }
  x[0] = d[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    scratch[i] = c[i - 1] / beta;
    beta = b[i] - a[i] * scratch[i];
    if (!(std::abs(beta) > 0.0) || !std::isfinite(beta)) {
      throw LinearSolveError("zero pivot at row " + std::to_string(i));
    }
    x[i] = (d[i] - a[i] * x[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= scratch[i] * x[i];
}

}  // namespace

Field solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n < 3 || lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw LinearSolveError("cyclic tridiagonal system needs n >= 3 and matching sizes");
  }
  // A = B + w v^T with w = (gamma, 0, ..., 0, alpha), v = (1, 0, ..., 0, beta/gamma).
  const double alpha = upper[n - 1];  // A[n-1][0]
  const double beta = lower[0];       // A[0][n-1]
  const double gamma = -diag[0];

  Field b(diag.begin(), diag.end());
  b[0] = diag[0] - gamma;
  b[n - 1] = diag[n - 1] - alpha * beta / gamma;

  Field scratch(n);
  Field y(n);
  thomas(lower, b, upper, rhs, y, scratch);

  Field w(n, 0.0);
  w[0] = gamma;
  w[n - 1] = alpha;
  Field z(n);
  thomas(lower, b, upper, w, z, scratch);

  const double vy = y[0] + beta / gamma * y[n - 1];
  const double vz = z[0] + beta / gamma * z[n - 1];
  const double denom = 1.0 + vz;
  if (!(std::abs(denom) > 0.0) || !std::isfinite(denom)) {
    throw LinearSolveError("singular periodic correction");
  }
  const double factor = vy / denom;
  for (std::size_t i = 0; i < n; ++i) y[i] -= factor * z[i];
  for (double v : y) {
    if (!std::isfinite(v)) throw LinearSolveError("non-finite solution");
  }
  return y;
}

}  // namespace nsk
