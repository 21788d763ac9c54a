#include "nsk/trajectory_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "nsk/error.hpp"

namespace nsk {
namespace {

constexpr const char* kMagic = "nskappa-trajectory";
constexpr int kVersion = 1;

void put(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, " %a", v);
  out << buf;
}

void put_field(std::ostream& out, const Field& f) {
  for (double v : f) put(out, v);
}

// Parses whitespace-separated doubles from one line.
std::vector<double> parse_doubles(const std::string& text, const std::string& where) {
  std::vector<double> out;
  const char* p = text.c_str();
  while (true) {
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p == '\0') break;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(p, &end);
    if (end == p) throw FormatError(where + ": malformed number");
    out.push_back(v);
    p = end;
  }
  return out;
}

std::string next_line(std::istream& in, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("unexpected end of file before " + what);
  return line;
}

// "key rest..." -> rest, FormatError if the key does not match.
std::string expect_key(std::istream& in, const std::string& key) {
  const std::string line = next_line(in, key);
  if (line.compare(0, key.size(), key) != 0 ||
      (line.size() > key.size() && line[key.size()] != ' ')) {
    throw FormatError("expected header '" + key + "', found '" + line.substr(0, 40) + "'");
  }
  return line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
}

std::size_t to_count(const std::string& s, const std::string& key) {
  std::istringstream ss(s);
  long long v = -1;
  if (!(ss >> v) || v < 0) throw FormatError("bad value for " + key);
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.n();
  const SolverConfig& c = traj.config;
  out << kMagic << ' ' << kVersion << '\n';
  out << "n " << n << '\n';
  out << "snapshots " << traj.size() << '\n';
  out << "params";
  put(out, traj.params.mu());
  put(out, traj.params.R());
  put(out, traj.params.cv());
  put(out, traj.params.kappa());
  out << "\nsolver";
  put(out, c.dt_initial);
  put(out, c.t_end);
  put(out, c.cfl_safety);
  out << ' ' << c.snapshot_every;
  put(out, c.snapshot_dt);
  out << ' ' << c.scheme_order << ' ' << c.max_halvings << '\n';
  out << "rho0";
  if (n > 0) put_field(out, traj.initial().rho0);
  out << "\ndt_history " << traj.dt_history.size();
  put_field(out, traj.dt_history);
  out << "\ndata\n";
  for (const LagState& s : traj.snapshots) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", s.t);
    out << buf;
    put_field(out, s.rho);
    put_field(out, s.u);
    put_field(out, s.theta);
    put_field(out, s.x_pos);
    out << '\n';
  }
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_trajectory(out, traj);
  if (!out) throw FormatError("write to " + path.string() + " failed");
}

Trajectory read_trajectory(std::istream& in) {
  {
    std::istringstream head(next_line(in, "magic"));
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic) throw FormatError("not a trajectory file");
    if (version != kVersion) {
      throw FormatError("unsupported trajectory version " + std::to_string(version));
    }
  }
  const std::size_t n = to_count(expect_key(in, "n"), "n");
  const std::size_t count = to_count(expect_key(in, "snapshots"), "snapshots");

  const auto p = parse_doubles(expect_key(in, "params"), "params");
  if (p.size() != 4) throw FormatError("params needs 4 values");
  Trajectory traj;
  traj.params = GasParams(p[0], p[1], p[2], p[3]);

  const auto sv = parse_doubles(expect_key(in, "solver"), "solver");
  if (sv.size() != 7) throw FormatError("solver needs 7 values");
  traj.config.dt_initial = sv[0];
  traj.config.t_end = sv[1];
  traj.config.cfl_safety = sv[2];
  traj.config.snapshot_every = static_cast<std::size_t>(sv[3]);
  traj.config.snapshot_dt = sv[4];
  traj.config.scheme_order = static_cast<int>(sv[5]);
  traj.config.max_halvings = static_cast<int>(sv[6]);

  const Field rho0 = parse_doubles(expect_key(in, "rho0"), "rho0");
  if (rho0.size() != n) {
    throw FormatError("rho0 has " + std::to_string(rho0.size()) + " values, expected " +
                      std::to_string(n));
  }
  const auto dth = parse_doubles(expect_key(in, "dt_history"), "dt_history");
  if (dth.empty() || static_cast<std::size_t>(dth[0]) != dth.size() - 1) {
    throw FormatError("dt_history count does not match its values");
  }
  traj.dt_history.assign(dth.begin() + 1, dth.end());
  if (next_line(in, "data") != "data") throw FormatError("expected 'data' marker");

  const std::size_t width = 1 + 4 * n;
  for (std::size_t row = 0; row < count; ++row) {
    std::string line;
    if (!std::getline(in, line)) {
      throw FormatError("row " + std::to_string(row) + ": missing (file has " +
                        std::to_string(row) + " of " + std::to_string(count) + " rows)");
    }
    const auto v = parse_doubles(line, "row " + std::to_string(row));
    if (v.size() != width) {
      throw FormatError("row " + std::to_string(row) + ": expected " + std::to_string(width) +
                        " values, found " + std::to_string(v.size()));
    }
    LagState s;
    s.t = v[0];
    auto slice = [&](std::size_t k) {
      return Field(v.begin() + 1 + static_cast<std::ptrdiff_t>(k * n),
                   v.begin() + 1 + static_cast<std::ptrdiff_t>((k + 1) * n));
    };
    s.rho = slice(0);
    s.u = slice(1);
    s.theta = slice(2);
    s.x_pos = slice(3);
    s.rho0 = rho0;
    traj.times.push_back(s.t);
    traj.snapshots.push_back(std::move(s));
  }
  std::string extra;
  while (std::getline(in, extra)) {
    if (!extra.empty()) throw FormatError("row " + std::to_string(count) + ": unexpected data");
  }
  return traj;
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  return read_trajectory(in);
}

}  // namespace nsk
