#pragma once

// Line-oriented configuration:
//
//   # comment
//   [gas]
//   mu = 1.0
//   kappa = 0.01
//
// Sections: [gas], [grid], [solver], [initial], [sweep], [lemma17]. Lists are
// comma separated, optionally inside brackets. Unknown sections or keys,
// duplicate keys and malformed values raise ParseError with the line number;
// physical values are checked after parsing and raise ValidationError.

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nsk/core.hpp"
#include "nsk/solver.hpp"
#include "nsk/sweep.hpp"

namespace nsk {

struct InitialDataSpec {
  /// constant, sine_density, sine_all, sampled_jump or file.
  std::string generator = "constant";
  double rho_mean = 1.0;
  double rho_amp = 0.0;
  double u_mean = 0.0;
  double u_amp = 0.0;
  double theta_mean = 1.0;
  double theta_amp = 0.0;
  double phase = 0.0;
  double jump_low = 0.7;   ///< sampled_jump density outside [1/4, 3/4)
  double jump_high = 1.3;  ///< sampled_jump density inside [1/4, 3/4)
  std::string file;        ///< three columns rho u theta, one line per cell
  double rho_lower = 1e-3;
  double rho_upper = 1e3;
  double theta_lower = 1e-3;
  double theta_upper = 1e3;
  bool normalize_momentum = false;
};

struct SweepSection {
  std::vector<double> kappas;
  bool mollify = true;
  DataMode data_mode = DataMode::kShared;
  std::vector<DistanceNorm> norms{kAllNorms.begin(), kAllNorms.end()};
  double branch_kappa = 1e-15;
  double alpha = 0.5;
  bool pair_lemma = true;
  std::size_t threads = 0;
  std::vector<double> probe_sizes;  ///< empty: no stability probe
  std::vector<ProbeField> probe_fields{ProbeField::kRho, ProbeField::kU};
  double probe_kappa = 0.01;
};

struct Lemma17Section {
  double D = 0.0;
  /// constant (Phi = scale), power (scale y^p) or exponential (scale e^y).
  std::string phi = "power";
  double phi_scale = 1.0;
  double phi_power = 2.0;
  double delta = 1.0;  ///< constant delta(t)
  double tau0 = 1.0;
  double T = 1.0;
  /// Number of kappa values spread evenly over [0, kappa0).
  std::size_t below_count = 20;
  /// Extra kappa values checked as well (for instance above kappa0).
  std::vector<double> extra_kappas;
};

struct Config {
  GasParams gas{1.0, 1.0, 1.0, 0.0};
  std::size_t n = 128;
  /// Optional grid ladder for a residual-vs-resolution table in cmd_run.
  std::vector<std::size_t> refinement;
  SolverConfig solver;
  InitialDataSpec initial;
  SweepSection sweep;
  Lemma17Section lemma17;
  bool has_sweep = false;
  bool has_lemma17 = false;
  /// Parsed (section.key, raw value) pairs in file order.
  std::vector<std::pair<std::string, std::string>> entries;
};

struct KeyValue {
  std::size_t line = 0;
  std::string section;
  std::string key;
  std::string value;
};

/// Shared tokenizer: comments, sections and `key = value` lines.
std::vector<KeyValue> read_key_values(const std::string& text);

Config parse_config_text(const std::string& text);

/// ParseError (line 0) if the file cannot be read.
Config parse_config(const std::filesystem::path& path);

/// Canonical echo of every effective setting, one `section.key = value` per
/// line; its hash identifies a configuration in manifests.
std::string config_echo(const Config& config);

/// Shortest round-trip decimal for a double.
std::string format_number(double v);

}  // namespace nsk
