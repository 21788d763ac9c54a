#pragma once

// gnuplot script emission. Scripts carry their data inline (datablocks), so
// they are self-contained; nothing is rendered here.

#include <string>

#include "nsk/csv.hpp"

namespace nsk {

enum class PlotKind {
  kSweep,        ///< kappa column: distance vs kappa (log-log) and Hoff terms vs kappa
  kRun,          ///< t column with extrema: extrema vs time
  kConvergence,  ///< n column: residuals vs resolution (log-log)
  kProbe,        ///< eps column: distance vs perturbation size
  kLemma,        ///< kappa with sup_tau: tau vs kappa
  kUnknown,
};

PlotKind detect_plot_kind(const CsvTable& table);

/// Script for one report table. An empty table gives a comment-only script.
/// Output depends only on the table contents and the name.
std::string emit_plot_script(const CsvTable& table, const std::string& name);

}  // namespace nsk
