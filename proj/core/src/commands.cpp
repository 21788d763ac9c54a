#include "nsk/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "nsk/error.hpp"
#include "nsk/initial_data.hpp"
#include "nsk/plots.hpp"
#include "nsk/trajectory_io.hpp"

#ifndef NSK_VERSION
#define NSK_VERSION "0.0.0"
#endif

namespace nsk {
namespace fs = std::filesystem;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << text;
}

// Collects written files and emits the manifest at the end of a command.
class Manifest {
 public:
  Manifest(std::string command, fs::path dir)
      : command_(std::move(command)), dir_(std::move(dir)),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(dir_);
  }

  void table(const std::string& name, const CsvTable& t) {
    t.write(dir_ / name);
    files_.push_back(name);
  }
  void text(const std::string& name, const std::string& s) {
    write_text(dir_ / name, s);
    files_.push_back(name);
  }
  void trajectory(const std::string& name, const Trajectory& traj) {
    write_trajectory(dir_ / name, traj);
    files_.push_back(name);
  }

  void finish(const std::string& config_text) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ostringstream os;
    os << "tool = nskappa " << NSK_VERSION << '\n';
    os << "command = " << command_ << '\n';
    os << "config_hash = fnv1a64:" << hex64(fnv1a64(config_text)) << '\n';
    os << "wall_clock_seconds = " << format_number(wall) << '\n';
    os << "\n[config]\n" << config_text;
    os << "\n[outputs]\n";
    for (const auto& f : files_) {
      os << f << " = fnv1a64:" << hex64(fnv1a64(read_text(dir_ / f))) << '\n';
    }
    write_text(dir_ / "manifest.txt", os.str());
  }

 private:
  std::string command_;
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> files_;
};

std::string b(bool v) { return v ? "1" : "0"; }

void add_hoff_columns(std::vector<std::string>& h) {
  for (const char* c :
       {"hoff1.sup_int_sigma_sq", "hoff1.sup_int_dxu_sq", "hoff1.kappa_int_int_dxtheta_sq",
        "hoff1.int_int_dxsigma_sq", "hoff1.int_int_dtu_sq", "hoff1.int_sup_sigma_sq",
        "hoff1.int_sup_dxu_sq", "hoff1.sup_u_sq", "hoff2.sup_w_int_dxsigma_sq",
        "hoff2.sup_w_kappa_int_dxtheta_sq", "hoff2.int_w_int_dtsigma_sq",
        "hoff2.int_w_int_dx_kappa_dxtheta_sq"}) {
    h.emplace_back(c);
  }
}

void add_hoff_values(std::vector<std::string>& r, const Hoff1& a, const Hoff2& h) {
  for (double v : {a.sup_int_sigma_sq, a.sup_int_dxu_sq, a.kappa_int_int_dxtheta_sq,
                   a.int_int_dxsigma_sq, a.int_int_dtu_sq, a.int_sup_sigma_sq, a.int_sup_dxu_sq,
                   a.sup_u_sq, h.sup_w_int_dxsigma_sq, h.sup_w_kappa_int_dxtheta_sq,
                   h.int_w_int_dtsigma_sq, h.int_w_int_dx_kappa_dxtheta_sq}) {
    r.push_back(csv_number(v));
  }
}

const char* const kWeightedColumns[] = {
    "weighted_reg.sup_kalpha_int_dxtheta_sq",
    "weighted_reg.sup_kalpha_int_dxrho_sq",
    "weighted_reg.kalpha_m1_int_int_dx_kappa_dxtheta_sq",
    "weighted_reg.sup_kappa_int_dxtheta_sq",
    "weighted_reg.sup_kappa_max_dxrho_sq",
    "weighted_reg.sup_kappa_max_dxtheta_sq",
    "weighted_reg.data_weighted_norm",
    "weighted_reg.data_resolution_ratio",
    "weighted_reg.ill_prepared",
};

void add_weighted_values(std::vector<std::string>& r, const WeightedRegularity& w) {
  for (double v : {w.sup_kalpha_int_dxtheta_sq, w.sup_kalpha_int_dxrho_sq,
                   w.kalpha_m1_int_int_dx_kappa_dxtheta_sq, w.sup_kappa_int_dxtheta_sq,
                   w.sup_kappa_max_dxrho_sq, w.sup_kappa_max_dxtheta_sq, w.data_weighted_norm,
                   w.data_resolution_ratio}) {
    r.push_back(csv_number(v));
  }
  r.push_back(b(w.ill_prepared));
}

Trajectory run_from_config(const Config& config, std::size_t n, const SolverConfig& solver) {
  const GeneratedData data = generate_initial(config.initial, n);
  const InitialFields& f = data.fields;
  return run(make_initial_state(f.rho, f.u, f.theta), config.gas, solver);
}

}  // namespace

fs::path resolve_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "nsk_out";
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string error_record(const std::string& command, const std::string& kind,
                         const std::string& message, int exit_code) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = exit_code;
  return j.dump();
}

int guarded(const std::string& command, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << error_record(command, e.kind(), e.what(), kExitUsage) << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << error_record(command, e.kind(), e.what(), kExitUsage) << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << error_record(command, e.kind(), e.what(), kExitUsage) << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << error_record(command, e.kind(), e.what(), kExitFailure) << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << error_record(command, "InternalError", e.what(), kExitFailure) << '\n';
    return kExitFailure;
  }
}

CsvTable diagnostics_table(const DiagnosticsReport& r) {
  CsvTable t({"t", "mass_M", "energy_E", "momentum", "pressure_int", "kinetic_int", "entropy",
              "entropy_rate", "entropy_production", "entropy_balance_residual", "rho_min",
              "rho_max", "theta_min", "theta_max", "int_sigma_sq", "A1", "A2",
              "sigma_pde_residual", "pgamma_residual", "flow_map_residual",
              "eulerian_length"});
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    t.add_row(std::vector<double>{
        r.times[k], r.conserved.mass[k], r.conserved.energy[k], r.conserved.momentum[k],
        r.pressure_int[k], r.kinetic_int[k], r.entropy.entropy[k], r.entropy.rate[k],
        r.entropy.production[k], r.entropy.residual[k], r.extrema.rho_min[k],
        r.extrema.rho_max[k], r.extrema.theta_min[k], r.extrema.theta_max[k],
        r.hoff.int_sigma_sq[k], r.hoff.A1[k], r.hoff.A2[k], r.sigma_pde_residual[k],
        r.pgamma_residual[k], r.flow_map_residual[k], r.eulerian_length[k]});
  }
  return t;
}

CsvTable summary_table(const DiagnosticsReport& r, const ConservedSeries& c) {
  CsvTable t({"quantity", "value"});
  auto add = [&t](const std::string& name, double v) { t.add_row({name, csv_number(v)}); };
  std::vector<std::string> names;
  add_hoff_columns(names);
  std::vector<std::string> values;
  add_hoff_values(values, r.hoff.first, r.hoff.second);
  for (std::size_t i = 0; i < names.size(); ++i) t.add_row({names[i], values[i]});
  add("mass_drift", c.mass_drift);
  add("energy_drift", c.energy_drift);
  add("momentum_drift", c.momentum_drift);
  add("global_rho_min", r.extrema.global_rho_min);
  add("global_rho_max", r.extrema.global_rho_max);
  add("global_theta_min", r.extrema.global_theta_min);
  add("global_theta_max", r.extrema.global_theta_max);
  add("max_entropy_balance_residual", max_interior(r.entropy.residual));
  add("max_sigma_pde_residual", max_interior(r.sigma_pde_residual));
  add("max_pgamma_residual", max_interior(r.pgamma_residual));
  add("max_flow_map_residual",
      *std::max_element(r.flow_map_residual.begin(), r.flow_map_residual.end()));
  t.add_row({"dtinv_applicable", b(r.dtinv_applicable)});
  add("dtinv_sigma_max", r.dtinv_applicable ? r.dtinv.max_abs : std::nan(""));
  add("dtinv_bound", r.dtinv_applicable ? r.dtinv.bound : std::nan(""));
  t.add_row({"dtinv_pass", r.dtinv_applicable ? b(r.dtinv.pass) : "nan"});
  add("weighted_reg.alpha", r.weighted.alpha);
  std::vector<std::string> wv;
  add_weighted_values(wv, r.weighted);
  for (std::size_t i = 0; i < wv.size(); ++i) t.add_row({kWeightedColumns[i], wv[i]});
  return t;
}

CsvTable sweep_table(const SweepResult& s) {
  std::vector<std::string> h{"kappa"};
  for (DistanceNorm n : s.norms) h.push_back("d_" + norm_name(n));
  add_hoff_columns(h);
  for (const char* c : {"rho_min", "rho_max", "theta_min", "theta_max", "energy_drift"}) {
    h.emplace_back(c);
  }
  for (const char* c : kWeightedColumns) h.emplace_back(c);
  for (const char* c :
       {"dtinv_sigma_max", "dtinv_bound", "dtinv_pass", "pairing.D_eff", "pairing.int_delta",
        "pairing.kappa0", "pairing.tau0", "pairing.tau_bar", "pairing.tau_bar_uniform",
        "pairing.sup_A2", "pairing.margin", "pairing.pass", "data.sqrt_kappa_max_drho",
        "data.envelope", "steps"}) {
    h.emplace_back(c);
  }
  CsvTable t(h);
  const double nan = std::nan("");
  for (const SweepRow& row : s.rows) {
    std::vector<std::string> r{csv_number(row.kappa)};
    for (DistanceNorm n : s.norms) r.push_back(csv_number(row.dist(n)));
    add_hoff_values(r, row.hoff1, row.hoff2);
    for (double v : {row.rho_min, row.rho_max, row.theta_min, row.theta_max, row.energy_drift}) {
      r.push_back(csv_number(v));
    }
    add_weighted_values(r, row.weighted);
    r.push_back(csv_number(row.dtinv_applicable ? row.dtinv.max_abs : nan));
    r.push_back(csv_number(row.dtinv_applicable ? row.dtinv.bound : nan));
    r.push_back(row.dtinv_applicable ? b(row.dtinv.pass) : "nan");
    const PairingRecord& p = row.pairing;
    for (double v : {p.D_eff, p.int_delta, p.kappa0, p.tau0, p.tau_bar, p.tau_bar_uniform,
                     p.sup_A2, p.margin}) {
      r.push_back(csv_number(row.paired ? v : nan));
    }
    r.push_back(row.paired ? b(p.pass) : "nan");
    r.push_back(csv_number(row.sqrt_kappa_max_drho));
    r.push_back(csv_number(row.mollifier_envelope));
    r.push_back(std::to_string(row.steps));
    t.add_row(std::move(r));
  }
  return t;
}

CsvTable sweep_summary_table(const SweepResult& s) {
  CsvTable t({"quantity", "value"});
  for (DistanceNorm n : s.norms) {
    const RateFit& f = s.rate(n);
    t.add_row({"rate." + norm_name(n), f.degenerate ? "nan" : csv_number(f.rate)});
    t.add_row({"rate_status." + norm_name(n), f.marker});
    t.add_row({"monotone." + norm_name(n), b(s.is_monotone(n))});
  }
  t.add_row({"degenerate", b(s.degenerate)});
  t.add_row({"branch_kappa", csv_number(s.branch_kappa)});
  t.add_row({"branch_distance", csv_number(s.branch_distance)});
  t.add_row({"ill_prepared", b(s.ill_prepared)});
  for (const UniformityEntry& e : kappa_uniformity(s)) {
    t.add_row({"uniform3." + e.quantity, b(e.within)});
  }
  return t;
}

CsvTable probe_table(const ProbeResult& p) {
  CsvTable t({"eps", "distance"});
  for (const ProbeRow& r : p.rows) t.add_row(std::vector<double>{r.eps, r.distance});
  return t;
}

CsvTable lemma_table(const std::vector<VerifyRow>& rows) {
  CsvTable t({"kappa", "sup_tau", "tau_bar", "below_threshold", "pass", "blowup",
              "blowup_time"});
  for (const VerifyRow& r : rows) {
    t.add_row({csv_number(r.kappa), csv_number(r.sup_tau), csv_number(r.tau_bar),
               b(r.below_threshold), b(r.pass), b(r.blowup),
               r.blowup ? csv_number(r.blowup_time) : "nan"});
  }
  return t;
}

BoundProblem lemma_problem(const Lemma17Section& s) {
  BoundProblem p;
  p.D = s.D;
  p.tau0 = s.tau0;
  p.T = s.T;
  const double delta = s.delta;
  p.delta = [delta](double) { return delta; };
  p.delta_grid = {0.0, s.T};
  const double scale = s.phi_scale;
  const double power = s.phi_power;
  if (s.phi == "constant") {
    p.Phi = [scale](double) { return scale; };
  } else if (s.phi == "exponential") {
    p.Phi = [scale](double y) { return scale * std::exp(y); };
  } else {
    p.Phi = [scale, power](double y) { return scale * std::pow(y, power); };
  }
  return p;
}

std::vector<double> lemma_kappas(const Lemma17Section& s, const BoundResult& r) {
  std::vector<double> out;
  const double top = std::isfinite(r.kappa0) ? r.kappa0 : 1.0;
  for (std::size_t i = 0; i < s.below_count; ++i) {
    out.push_back(top * static_cast<double>(i) / static_cast<double>(s.below_count));
  }
  out.insert(out.end(), s.extra_kappas.begin(), s.extra_kappas.end());
  return out;
}

Thresholds parse_thresholds(const std::string& text) {
  static const char* const known[] = {
      "max_flow_map_residual", "max_mass_drift",      "max_energy_drift",
      "max_momentum_drift",    "max_entropy_residual", "max_sigma_residual",
      "max_pgamma_residual",   "min_rho",             "min_theta"};
  Thresholds th;
  for (const KeyValue& kv : read_key_values(text)) {
    if (!kv.section.empty() && kv.section != "thresholds") {
      throw ParseError(kv.line, "unknown section [" + kv.section + "]");
    }
    if (kv.key == "require_dtinv") {
      th.require_dtinv = kv.value == "true" || kv.value == "1";
      continue;
    }
    if (std::find(std::begin(known), std::end(known), kv.key) == std::end(known)) {
      throw ParseError(kv.line, "unknown threshold '" + kv.key + "'");
    }
    char* end = nullptr;
    const double v = std::strtod(kv.value.c_str(), &end);
    if (kv.value.empty() || *end != '\0') {
      throw ParseError(kv.line, kv.key + ": '" + kv.value + "' is not a number");
    }
    th.limits.emplace_back(kv.key, v);
  }
  return th;
}

std::vector<VerifyCheck> verify_trajectory(const Trajectory& traj, const Thresholds& th) {
  std::vector<VerifyCheck> checks;
  auto structural = [&checks](const std::string& name, bool ok, const std::string& note) {
    checks.push_back({name, ok ? 0.0 : 1.0, 0.0, ok, note});
  };

  if (traj.size() == 0) {
    structural("nonempty", false, "trajectory has no snapshots");
    return checks;
  }
  bool valid = true;
  std::string note;
  for (std::size_t k = 0; k < traj.size() && valid; ++k) {
    try {
      traj.snapshots[k].validate();
    } catch (const Error& e) {
      valid = false;
      note = "snapshot " + std::to_string(k) + ": " + e.what();
    }
  }
  structural("snapshot_positivity", valid, note);

  bool ordered = traj.times.front() == 0.0;
  for (std::size_t k = 1; k < traj.size(); ++k) ordered = ordered && traj.times[k] > traj.times[k - 1];
  structural("times_increasing_from_zero", ordered, ordered ? "" : "times are not increasing from 0");

  const LagState& s0 = traj.initial();
  bool layout = s0.rho == s0.rho0;
  const Grid grid = s0.grid();
  for (std::size_t j = 0; j < s0.size(); ++j) {
    layout = layout && std::abs(s0.x_pos[j] - grid.center(j)) <= 1e-14;
  }
  structural("initial_layout", layout, layout ? "" : "t = 0 state is not x = x_j, rho = rho0");
  if (!valid) return checks;

  const ConservedSeries c = conserved_integrals(traj);
  double flow = 0.0;
  for (const LagState& s : traj.snapshots) flow = std::max(flow, flow_map_residual(s));
  const ExtremaRecord e = bounds_report(traj);

  auto residual = [&](const std::string& name) -> double {
    if (traj.size() < 3) return std::nan("");
    if (name == "max_entropy_residual") return max_interior(entropy_balance(traj, traj.params).residual);
    if (name == "max_sigma_residual") return max_interior(sigma_pde_residual(traj, traj.params));
    return max_interior(pgamma_identity_residual(traj, traj.params));
  };

  for (const auto& [key, limit] : th.limits) {
    double v = 0.0;
    bool lower = false;
    if (key == "max_flow_map_residual") {
      v = flow;
    } else if (key == "max_mass_drift") {
      v = c.mass_drift;
    } else if (key == "max_energy_drift") {
      v = c.energy_drift;
    } else if (key == "max_momentum_drift") {
      v = c.momentum_drift;
    } else if (key == "min_rho") {
      v = e.global_rho_min;
      lower = true;
    } else if (key == "min_theta") {
      v = e.global_theta_min;
      lower = true;
    } else {
      v = residual(key);
    }
    const bool pass = lower ? v >= limit : v <= limit;
    checks.push_back({key, v, limit, pass, std::isnan(v) ? "needs at least 3 snapshots" : ""});
  }
  if (th.require_dtinv) {
    try {
      const DtInvSigmaCheck d = dtinv_sigma_check(traj, traj.params);
      checks.push_back({"dtinv_sigma", d.max_abs, d.bound, d.pass, ""});
    } catch (const NormalizationError& ex) {
      checks.push_back({"dtinv_sigma", std::nan(""), std::nan(""), false, ex.what()});
    }
  }
  return checks;
}

int cmd_run(const Config& config, const fs::path& out_dir, std::ostream& log) {
  Manifest manifest("run", out_dir);
  const Trajectory traj = run_from_config(config, config.n, config.solver);
  const DiagnosticsReport report = evaluate(traj, config.sweep.alpha);
  manifest.trajectory("trajectory.txt", traj);
  const CsvTable diag = diagnostics_table(report);
  manifest.table("diagnostics.csv", diag);
  manifest.table("summary.csv", summary_table(report, report.conserved));
  manifest.text("diagnostics.gp", emit_plot_script(diag, "diagnostics"));

  if (!config.refinement.empty()) {
    CsvTable conv({"n", "dt", "entropy_balance_residual", "sigma_pde_residual",
                   "pgamma_residual", "flow_map_residual"});
    const double n0 = static_cast<double>(config.refinement.front());
    for (std::size_t n : config.refinement) {
      SolverConfig sc = config.solver;
      const double scale = n0 / static_cast<double>(n);
      sc.dt_initial *= scale;
      sc.snapshot_dt *= scale;
      const Trajectory tr = run_from_config(config, n, sc);
      conv.add_row(std::vector<double>{
          static_cast<double>(n), sc.dt_initial,
          max_interior(entropy_balance(tr, tr.params).residual),
          max_interior(sigma_pde_residual(tr, tr.params)),
          max_interior(pgamma_identity_residual(tr, tr.params)), flow_map_consistency(tr)});
    }
    manifest.table("convergence.csv", conv);
    manifest.text("convergence.gp", emit_plot_script(conv, "convergence"));
  }
  manifest.finish(config_echo(config));
  log << "run: " << traj.size() << " snapshots, " << traj.dt_history.size() << " steps, energy drift "
      << format_number(report.conserved.energy_drift) << ", outputs in " << out_dir.string() << '\n';
  return kExitOk;
}

int cmd_sweep(const Config& config, const fs::path& out_dir, std::ostream& log) {
  if (!config.has_sweep) throw ValidationError("config has no [sweep] section");
  Manifest manifest("sweep", out_dir);
  const GeneratedData data = generate_initial(config.initial, config.n);

  SweepConfig sc;
  sc.kappas = config.sweep.kappas;
  sc.base = data.fields;
  sc.gas = config.gas;
  sc.solver = config.solver;
  sc.mollify = config.sweep.mollify;
  sc.data_mode = config.sweep.data_mode;
  sc.normalize_momentum = config.initial.normalize_momentum;
  sc.norms = config.sweep.norms;
  sc.branch_kappa = config.sweep.branch_kappa;
  sc.alpha = config.sweep.alpha;
  sc.pair_lemma = config.sweep.pair_lemma;
  sc.threads = config.sweep.threads;
  const SweepResult result = kappa_limit_study(sc);

  const CsvTable table = sweep_table(result);
  manifest.table("sweep.csv", table);
  manifest.table("sweep_summary.csv", sweep_summary_table(result));
  manifest.text("sweep.gp", emit_plot_script(table, "sweep"));

  bool probes_ok = true;
  for (ProbeField field : config.sweep.probe_sizes.empty() ? std::vector<ProbeField>{}
                                                           : config.sweep.probe_fields) {
    ProbeConfig pc;
    pc.base = data.fields;
    pc.gas = config.gas.with_kappa(config.sweep.probe_kappa);
    pc.solver = config.solver;
    pc.sizes = config.sweep.probe_sizes;
    pc.field = field;
    pc.threads = config.sweep.threads;
    const ProbeResult pr = stability_probe(pc);
    const std::string name = "probe_" + probe_field_name(field);
    const CsvTable pt = probe_table(pr);
    manifest.table(name + ".csv", pt);
    manifest.text(name + ".gp", emit_plot_script(pt, name));
    log << name << ": exponent " << format_number(pr.fit.rate) << " (required >= "
        << format_number(pr.required_exponent) << ")" << (pr.pass ? "" : " FAILED") << '\n';
    probes_ok = probes_ok && pr.pass;
  }
  manifest.finish(config_echo(config));

  bool monotone = true;
  for (DistanceNorm n : result.norms) monotone = monotone && (result.degenerate || result.is_monotone(n));
  log << "sweep: " << result.rows.size() << " kappa values";
  for (DistanceNorm n : result.norms) {
    log << ", rate(" << norm_name(n) << ") = " << result.rate(n).marker;
    if (!result.rate(n).degenerate) log << ' ' << format_number(result.rate(n).rate);
  }
  log << '\n';
  if (!monotone) log << "sweep: distances are not strictly decreasing in kappa\n";
  return monotone && probes_ok ? kExitOk : kExitFailure;
}

int cmd_lemma17(const Config& config, const fs::path& out_dir, std::ostream& log) {
  if (!config.has_lemma17) throw ValidationError("config has no [lemma17] section");
  Manifest manifest("lemma17", out_dir);
  const BoundProblem problem = lemma_problem(config.lemma17);
  const BoundResult result = compute_threshold(problem);
  const auto rows = verify_bound(problem, result, lemma_kappas(config.lemma17, result));
  const CsvTable table = lemma_table(rows);
  manifest.table("lemma17.csv", table);
  CsvTable summary({"quantity", "value"});
  summary.add_row({"kappa0", csv_number(result.kappa0)});
  summary.add_row({"tau_bar", csv_number(result.tau_bar)});
  summary.add_row({"psi_tau0", csv_number(result.psi_tau0)});
  summary.add_row({"sup_psi", csv_number(result.sup_psi)});
  summary.add_row({"int_delta", csv_number(result.int_delta)});
  summary.add_row({"growth", csv_number(result.growth)});
  summary.add_row({"lemma_holds", b(lemma_holds(rows))});
  manifest.table("lemma17_summary.csv", summary);
  manifest.text("lemma17.gp", emit_plot_script(table, "lemma17"));
  manifest.finish(config_echo(config));
  log << "lemma17: kappa0 = " << format_number(result.kappa0)
      << ", tau_bar = " << format_number(result.tau_bar) << ", "
      << (lemma_holds(rows) ? "bound holds below kappa0" : "bound VIOLATED below kappa0") << '\n';
  return lemma_holds(rows) ? kExitOk : kExitFailure;
}

int cmd_verify(const fs::path& trajectory, const fs::path& thresholds, const fs::path& out_dir,
               std::ostream& log) {
  const Thresholds th = parse_thresholds(read_text(thresholds));
  const Trajectory traj = read_trajectory(trajectory);
  const auto checks = verify_trajectory(traj, th);
  fs::create_directories(out_dir);
  CsvTable t({"check", "value", "threshold", "pass", "note"});
  bool ok = true;
  for (const VerifyCheck& c : checks) {
    std::string note = c.note;
    std::replace(note.begin(), note.end(), ',', ';');
    t.add_row({c.name, csv_number(c.value), csv_number(c.threshold), b(c.pass), note});
    if (!c.pass) {
      ok = false;
      log << "verify: FAILED " << c.name;
      if (!c.note.empty()) log << " (" << c.note << ")";
      log << '\n';
    }
  }
  t.write(out_dir / "verify.csv");
  if (ok) log << "verify: all " << checks.size() << " checks passed\n";
  return ok ? kExitOk : kExitFailure;
}

int cmd_plot(const fs::path& csv, const fs::path& out_dir, std::ostream& log) {
  const CsvTable table = CsvTable::read(csv);
  fs::create_directories(out_dir);
  const std::string name = csv.stem().string();
  const fs::path script = out_dir / (name + ".gp");
  write_text(script, emit_plot_script(table, name));
  log << "plot: wrote " << script.string() << '\n';
  return kExitOk;
}

}  // namespace nsk
