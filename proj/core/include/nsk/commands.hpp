#pragma once

// Command layer behind the nskappa tool. Every command writes its artifacts
// into an output directory and returns a process exit code:
//   0 success, 1 domain failure (failed check, solver error), 2 usage error.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nsk/bound_lemma.hpp"
#include "nsk/config.hpp"
#include "nsk/csv.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/sweep.hpp"

namespace nsk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable that overrides the default output directory.
inline constexpr const char* kOutDirEnv = "NSK_OUT_DIR";

/// Explicit flag value if non-empty, else $NSK_OUT_DIR, else "nsk_out".
std::filesystem::path resolve_output_dir(const std::string& flag_value);

std::uint64_t fnv1a64(std::string_view data);

/// One-line JSON error record: {"command","error","message","exit_code"}.
std::string error_record(const std::string& command, const std::string& kind,
                         const std::string& message, int exit_code);

/// Runs body, converting exceptions into an error record on err and the
/// matching exit code.
int guarded(const std::string& command, std::ostream& err, const std::function<int()>& body);

// Report tables (column names follow the diagnostics field names).
CsvTable diagnostics_table(const DiagnosticsReport& report);
CsvTable summary_table(const DiagnosticsReport& report, const ConservedSeries& conserved);
CsvTable sweep_table(const SweepResult& result);
CsvTable sweep_summary_table(const SweepResult& result);
CsvTable probe_table(const ProbeResult& result);
CsvTable lemma_table(const std::vector<VerifyRow>& rows);

/// Problem described by a [lemma17] section.
BoundProblem lemma_problem(const Lemma17Section& section);

/// Kappa grid: below_count values evenly spaced in [0, kappa0) followed by
/// the extra values.
std::vector<double> lemma_kappas(const Lemma17Section& section, const BoundResult& result);

struct Thresholds {
  std::vector<std::pair<std::string, double>> limits;  ///< in file order
  bool require_dtinv = false;
};

/// Keys: max_flow_map_residual, max_mass_drift, max_energy_drift,
/// max_momentum_drift, max_entropy_residual, max_sigma_residual,
/// max_pgamma_residual, min_rho, min_theta, require_dtinv. ParseError for
/// anything else.
Thresholds parse_thresholds(const std::string& text);

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

/// Structural invariants (positivity, time ordering, t = 0 layout) followed
/// by the configured threshold checks.
std::vector<VerifyCheck> verify_trajectory(const Trajectory& traj, const Thresholds& thresholds);

int cmd_run(const Config& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_sweep(const Config& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_lemma17(const Config& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_verify(const std::filesystem::path& trajectory, const std::filesystem::path& thresholds,
               const std::filesystem::path& out_dir, std::ostream& log);
int cmd_plot(const std::filesystem::path& csv, const std::filesystem::path& out_dir,
             std::ostream& log);

}  // namespace nsk
