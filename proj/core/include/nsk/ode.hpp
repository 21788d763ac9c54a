#pragma once

// Adaptive Dormand-Prince 5(4) integrator for scalar ODEs.

#include <functional>

namespace nsk {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h0 = 0.0;  ///< initial step; 0 picks (t1 - t0) * 1e-3
  /// Integration stops as blow-up once |y| exceeds this value.
  double blowup_threshold = 1e15;
  int max_steps = 1000000;
};

struct OdeResult {
  double t_final = 0.0;
  double y_final = 0.0;
  double sup_y = 0.0;  ///< max of y over accepted steps
  bool blowup = false;
  double blowup_time = 0.0;
  int steps = 0;
};

/// Integrates y' = f(t, y) on [t0, t1]. Blow-up (threshold exceeded,
/// non-finite state, or step underflow) stops the integration and is reported
/// in the result, never thrown.
OdeResult integrate_dopri5(const std::function<double(double, double)>& f, double y0, double t0,
                           double t1, const OdeOptions& options = {});

}  // namespace nsk
