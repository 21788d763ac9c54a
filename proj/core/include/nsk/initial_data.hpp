#pragma once

#include <cstddef>

#include "nsk/config.hpp"
#include "nsk/mollifier.hpp"

namespace nsk {

struct GeneratedData {
  InitialFields fields;
  /// Set for sampled_jump: the data carry an O(1) jump on the grid scale.
  bool ill_prepared = false;
};

/// Samples the configured generator on n cells and checks the data bounds
/// rho_lower <= rho0 <= rho_upper and theta_lower <= theta0 <= theta_upper
/// (ValidationError otherwise). sampled_jump data still obey the bounds but
/// are flagged as ill-prepared. normalize_momentum removes the mean momentum.
GeneratedData generate_initial(const InitialDataSpec& spec, std::size_t n);

}  // namespace nsk
