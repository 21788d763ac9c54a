#include "nsk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nsk/error.hpp"

namespace nsk {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const KeyValue& kv, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw ParseError(kv.line, kv.key + ": '" + t + "' is not a number");
  }
  return v;
}

std::size_t to_size(const KeyValue& kv, const std::string& text) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ParseError(kv.line, kv.key + ": '" + t + "' is not a non-negative integer");
  }
  return v;
}

bool to_bool(const KeyValue& kv) {
  const std::string t = trim(kv.value);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ParseError(kv.line, kv.key + ": '" + t + "' is not a boolean");
}

std::vector<std::string> to_list(const KeyValue& kv) {
  std::string t = trim(kv.value);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ParseError(kv.line, kv.key + ": unterminated list");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<std::string> out;
  if (trim(t).empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_double_list(const KeyValue& kv) {
  std::vector<double> out;
  for (const auto& s : to_list(kv)) out.push_back(to_double(kv, s));
  return out;
}

using Setter = std::function<void(Config&, const KeyValue&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    m["gas.mu"] = [](Config& c, const KeyValue& kv) {
      c.gas = GasParams(to_double(kv, kv.value), c.gas.R(), c.gas.cv(), c.gas.kappa());
    };
    m["gas.R"] = [](Config& c, const KeyValue& kv) {
      c.gas = GasParams(c.gas.mu(), to_double(kv, kv.value), c.gas.cv(), c.gas.kappa());
    };
    m["gas.cv"] = [](Config& c, const KeyValue& kv) {
      c.gas = GasParams(c.gas.mu(), c.gas.R(), to_double(kv, kv.value), c.gas.kappa());
    };
    m["gas.kappa"] = [](Config& c, const KeyValue& kv) {
      c.gas = c.gas.with_kappa(to_double(kv, kv.value));
    };

    m["grid.n"] = [](Config& c, const KeyValue& kv) { c.n = to_size(kv, kv.value); };
    m["grid.refinement"] = [](Config& c, const KeyValue& kv) {
      c.refinement.clear();
      for (const auto& s : to_list(kv)) c.refinement.push_back(to_size(kv, s));
    };

    m["solver.dt"] = [](Config& c, const KeyValue& kv) {
      c.solver.dt_initial = to_double(kv, kv.value);
    };
    m["solver.t_end"] = [](Config& c, const KeyValue& kv) {
      c.solver.t_end = to_double(kv, kv.value);
    };
    m["solver.cfl_safety"] = [](Config& c, const KeyValue& kv) {
      c.solver.cfl_safety = to_double(kv, kv.value);
    };
    m["solver.snapshot_every"] = [](Config& c, const KeyValue& kv) {
      c.solver.snapshot_every = to_size(kv, kv.value);
    };
    m["solver.snapshot_dt"] = [](Config& c, const KeyValue& kv) {
      c.solver.snapshot_dt = to_double(kv, kv.value);
    };
    m["solver.scheme_order"] = [](Config& c, const KeyValue& kv) {
      c.solver.scheme_order = static_cast<int>(to_size(kv, kv.value));
    };
    m["solver.max_halvings"] = [](Config& c, const KeyValue& kv) {
      c.solver.max_halvings = static_cast<int>(to_size(kv, kv.value));
    };

    m["initial.generator"] = [](Config& c, const KeyValue& kv) {
      static const std::set<std::string> known = {"constant", "sine_density", "sine_all",
                                                  "sampled_jump", "file"};
      const std::string g = trim(kv.value);
      if (!known.count(g)) throw ParseError(kv.line, "unknown generator '" + g + "'");
      c.initial.generator = g;
    };
    auto initial_num = [&m](const std::string& key, double InitialDataSpec::*field) {
      m["initial." + key] = [field](Config& c, const KeyValue& kv) {
        c.initial.*field = to_double(kv, kv.value);
      };
    };
    initial_num("rho_mean", &InitialDataSpec::rho_mean);
    initial_num("rho_amp", &InitialDataSpec::rho_amp);
    initial_num("u_mean", &InitialDataSpec::u_mean);
    initial_num("u_amp", &InitialDataSpec::u_amp);
    initial_num("theta_mean", &InitialDataSpec::theta_mean);
    initial_num("theta_amp", &InitialDataSpec::theta_amp);
    initial_num("phase", &InitialDataSpec::phase);
    initial_num("jump_low", &InitialDataSpec::jump_low);
    initial_num("jump_high", &InitialDataSpec::jump_high);
    initial_num("rho_lower", &InitialDataSpec::rho_lower);
    initial_num("rho_upper", &InitialDataSpec::rho_upper);
    initial_num("theta_lower", &InitialDataSpec::theta_lower);
    initial_num("theta_upper", &InitialDataSpec::theta_upper);
    m["initial.file"] = [](Config& c, const KeyValue& kv) { c.initial.file = trim(kv.value); };
    m["initial.normalize_momentum"] = [](Config& c, const KeyValue& kv) {
      c.initial.normalize_momentum = to_bool(kv);
    };

    m["sweep.kappas"] = [](Config& c, const KeyValue& kv) {
      c.sweep.kappas = to_double_list(kv);
    };
    m["sweep.mollify"] = [](Config& c, const KeyValue& kv) { c.sweep.mollify = to_bool(kv); };
    m["sweep.data_mode"] = [](Config& c, const KeyValue& kv) {
      const std::string v = trim(kv.value);
      if (v == "shared") {
        c.sweep.data_mode = DataMode::kShared;
      } else if (v == "per_kappa") {
        c.sweep.data_mode = DataMode::kPerKappa;
      } else {
        throw ParseError(kv.line, "data_mode must be shared or per_kappa");
      }
    };
    m["sweep.norms"] = [](Config& c, const KeyValue& kv) {
      c.sweep.norms.clear();
      for (const auto& s : to_list(kv)) {
        try {
          c.sweep.norms.push_back(parse_norm(s));
        } catch (const DomainError& e) {
          throw ParseError(kv.line, e.what());
        }
      }
    };
    m["sweep.branch_kappa"] = [](Config& c, const KeyValue& kv) {
      c.sweep.branch_kappa = to_double(kv, kv.value);
    };
    m["sweep.alpha"] = [](Config& c, const KeyValue& kv) {
      c.sweep.alpha = to_double(kv, kv.value);
    };
    m["sweep.pair_lemma"] = [](Config& c, const KeyValue& kv) {
      c.sweep.pair_lemma = to_bool(kv);
    };
    m["sweep.threads"] = [](Config& c, const KeyValue& kv) {
      c.sweep.threads = to_size(kv, kv.value);
    };
    m["sweep.probe_sizes"] = [](Config& c, const KeyValue& kv) {
      c.sweep.probe_sizes = to_double_list(kv);
    };
    m["sweep.probe_fields"] = [](Config& c, const KeyValue& kv) {
      c.sweep.probe_fields.clear();
      for (const auto& s : to_list(kv)) {
        try {
          c.sweep.probe_fields.push_back(parse_probe_field(s));
        } catch (const DomainError& e) {
          throw ParseError(kv.line, e.what());
        }
      }
    };
    m["sweep.probe_kappa"] = [](Config& c, const KeyValue& kv) {
      c.sweep.probe_kappa = to_double(kv, kv.value);
    };

    auto lemma_num = [&m](const std::string& key, double Lemma17Section::*field) {
      m["lemma17." + key] = [field](Config& c, const KeyValue& kv) {
        c.lemma17.*field = to_double(kv, kv.value);
      };
    };
    lemma_num("D", &Lemma17Section::D);
    lemma_num("phi_scale", &Lemma17Section::phi_scale);
    lemma_num("phi_power", &Lemma17Section::phi_power);
    lemma_num("delta", &Lemma17Section::delta);
    lemma_num("tau0", &Lemma17Section::tau0);
    lemma_num("T", &Lemma17Section::T);
    m["lemma17.phi"] = [](Config& c, const KeyValue& kv) {
      const std::string v = trim(kv.value);
      if (v != "constant" && v != "power" && v != "exponential") {
        throw ParseError(kv.line, "phi must be constant, power or exponential");
      }
      c.lemma17.phi = v;
    };
    m["lemma17.below_count"] = [](Config& c, const KeyValue& kv) {
      c.lemma17.below_count = to_size(kv, kv.value);
    };
    m["lemma17.extra_kappas"] = [](Config& c, const KeyValue& kv) {
      c.lemma17.extra_kappas = to_double_list(kv);
    };
    return m;
  }();
  return table;
}

void validate(const Config& c) {
  if (c.n < 8) throw ValidationError("grid needs n >= 8 cells");
  for (std::size_t r : c.refinement) {
    if (r < 8) throw ValidationError("refinement levels need n >= 8 cells");
  }
  c.solver.validate();

  const InitialDataSpec& in = c.initial;
  if (!(in.rho_lower > 0.0)) throw ValidationError("lower density bound violated: rho_lower <= 0");
  if (!(in.theta_lower > 0.0)) {
    throw ValidationError("lower temperature bound violated: theta_lower <= 0");
  }
  if (!(in.rho_upper >= in.rho_lower)) throw ValidationError("rho_lower <= rho_upper required");
  if (!(in.theta_upper >= in.theta_lower)) {
    throw ValidationError("theta_lower <= theta_upper required");
  }
  if (in.generator == "file" && in.file.empty()) {
    throw ValidationError("generator 'file' needs initial.file");
  }

  if (c.has_sweep) {
    const SweepSection& s = c.sweep;
    if (s.kappas.empty()) throw ValidationError("kappas must not be empty");
    for (std::size_t i = 0; i < s.kappas.size(); ++i) {
      if (!(s.kappas[i] >= 0.0)) throw ValidationError("kappas must be >= 0");
      if (i > 0 && !(s.kappas[i] < s.kappas[i - 1])) {
        throw ValidationError("kappas must be strictly decreasing");
      }
    }
    if (s.kappas.back() != 0.0) throw ValidationError("kappas must end with 0");
    if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    if (s.branch_kappa < 0.0) throw ValidationError("branch_kappa >= 0 required");
    for (double e : s.probe_sizes) {
      if (!(e > 0.0)) throw ValidationError("probe sizes must be > 0");
    }
    if (!(s.probe_kappa >= 0.0)) throw ValidationError("probe_kappa >= 0 required");
  }
  if (c.has_lemma17) {
    const Lemma17Section& l = c.lemma17;
    if (!(l.T > 0.0)) throw ValidationError("lemma17 horizon T > 0 required");
    if (!(l.tau0 >= 0.0)) throw ValidationError("lemma17 tau0 >= 0 required");
    if (!(l.phi_scale > 0.0)) throw ValidationError("Phi must be positive: phi_scale > 0");
    if (!(l.delta >= 0.0)) throw ValidationError("delta >= 0 required");
    for (double k : l.extra_kappas) {
      if (!(k >= 0.0)) throw ValidationError("lemma17 kappas must be >= 0");
    }
  }
}

}  // namespace

std::vector<KeyValue> read_key_values(const std::string& text) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ParseError(line, "empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    KeyValue kv;
    kv.line = line;
    kv.section = section;
    kv.key = trim(s.substr(0, eq));
    kv.value = trim(s.substr(eq + 1));
    if (kv.key.empty()) throw ParseError(line, "missing key");
    out.push_back(kv);
  }
  return out;
}

Config parse_config_text(const std::string& text) {
  static const std::set<std::string> sections = {"gas",     "grid",  "solver",
                                                 "initial", "sweep", "lemma17"};
  Config c;
  std::set<std::string> seen;
  for (const KeyValue& kv : read_key_values(text)) {
    if (kv.section.empty()) throw ParseError(kv.line, "key '" + kv.key + "' outside a section");
    if (!sections.count(kv.section)) {
      throw ParseError(kv.line, "unknown section [" + kv.section + "]");
    }
    const std::string full = kv.section + "." + kv.key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw ParseError(kv.line, "unknown key '" + full + "'");
    if (!seen.insert(full).second) throw ParseError(kv.line, "duplicate key '" + full + "'");
    if (kv.section == "sweep") c.has_sweep = true;
    if (kv.section == "lemma17") c.has_lemma17 = true;
    it->second(c, kv);
    c.entries.emplace_back(full, kv.value);
  }
  validate(c);
  return c;
}

Config parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string config_echo(const Config& c) {
  std::ostringstream os;
  auto line = [&os](const std::string& key, const std::string& value) {
    os << key << " = " << value << '\n';
  };
  auto num = [&line](const std::string& key, double v) { line(key, format_number(v)); };
  auto list = [](const auto& values, auto to_text) {
    std::string s;
    for (const auto& v : values) {
      if (!s.empty()) s += ", ";
      s += to_text(v);
    }
    return s;
  };
  num("gas.mu", c.gas.mu());
  num("gas.R", c.gas.R());
  num("gas.cv", c.gas.cv());
  num("gas.kappa", c.gas.kappa());
  line("grid.n", std::to_string(c.n));
  line("grid.refinement",
       list(c.refinement, [](std::size_t v) { return std::to_string(v); }));
  num("solver.dt", c.solver.dt_initial);
  num("solver.t_end", c.solver.t_end);
  num("solver.cfl_safety", c.solver.cfl_safety);
  line("solver.snapshot_every", std::to_string(c.solver.snapshot_every));
  num("solver.snapshot_dt", c.solver.snapshot_dt);
  line("solver.scheme_order", std::to_string(c.solver.scheme_order));
  line("solver.max_halvings", std::to_string(c.solver.max_halvings));
  const InitialDataSpec& in = c.initial;
  line("initial.generator", in.generator);
  num("initial.rho_mean", in.rho_mean);
  num("initial.rho_amp", in.rho_amp);
  num("initial.u_mean", in.u_mean);
  num("initial.u_amp", in.u_amp);
  num("initial.theta_mean", in.theta_mean);
  num("initial.theta_amp", in.theta_amp);
  num("initial.phase", in.phase);
  num("initial.jump_low", in.jump_low);
  num("initial.jump_high", in.jump_high);
  line("initial.file", in.file);
  num("initial.rho_lower", in.rho_lower);
  num("initial.rho_upper", in.rho_upper);
  num("initial.theta_lower", in.theta_lower);
  num("initial.theta_upper", in.theta_upper);
  line("initial.normalize_momentum", in.normalize_momentum ? "true" : "false");
  if (c.has_sweep) {
    const SweepSection& s = c.sweep;
    line("sweep.kappas", list(s.kappas, format_number));
    line("sweep.mollify", s.mollify ? "true" : "false");
    line("sweep.data_mode", s.data_mode == DataMode::kShared ? "shared" : "per_kappa");
    line("sweep.norms", list(s.norms, norm_name));
    num("sweep.branch_kappa", s.branch_kappa);
    num("sweep.alpha", s.alpha);
    line("sweep.pair_lemma", s.pair_lemma ? "true" : "false");
    line("sweep.probe_sizes", list(s.probe_sizes, format_number));
    line("sweep.probe_fields", list(s.probe_fields, probe_field_name));
    num("sweep.probe_kappa", s.probe_kappa);
  }
  if (c.has_lemma17) {
    const Lemma17Section& l = c.lemma17;
    num("lemma17.D", l.D);
    line("lemma17.phi", l.phi);
    num("lemma17.phi_scale", l.phi_scale);
    num("lemma17.phi_power", l.phi_power);
    num("lemma17.delta", l.delta);
    num("lemma17.tau0", l.tau0);
    num("lemma17.T", l.T);
    line("lemma17.below_count", std::to_string(l.below_count));
    line("lemma17.extra_kappas", list(l.extra_kappas, format_number));
  }
  return os.str();
}

}  // namespace nsk
