#pragma once

#include <span>

#include "nsk/core.hpp"

namespace nsk {

/// Periodic tridiagonal system
///   lower[j] x[j-1] + diag[j] x[j] + upper[j] x[j+1] = rhs[j]   (indices mod n)
/// solved by the Thomas algorithm plus a Sherman-Morrison correction for the
/// two corner entries. Throws LinearSolveError on a vanishing or non-finite
/// pivot.
Field solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper, std::span<const double> rhs);

}  // namespace nsk
