#include "nsk/plots.hpp"

#include <sstream>
#include <vector>

namespace nsk {
namespace {

bool has(const CsvTable& t, const std::string& c) { return t.column(c) >= 0; }

std::vector<std::string> columns_with_prefix(const CsvTable& t, const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& h : t.header()) {
    if (h.compare(0, prefix.size(), prefix) == 0) out.push_back(h);
  }
  return out;
}

std::vector<std::string> columns_with_suffix(const CsvTable& t, const std::string& suffix) {
  std::vector<std::string> out;
  for (const auto& h : t.header()) {
    if (h.size() >= suffix.size() && h.compare(h.size() - suffix.size(), suffix.size(), suffix) == 0) {
      out.push_back(h);
    }
  }
  return out;
}

void datablock(std::ostringstream& os, const CsvTable& t) {
  os << "$data << EOD\n";
  os << "#";
  for (const auto& h : t.header()) os << ' ' << h;
  os << '\n';
  for (const auto& row : t.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
    os << '\n';
  }
  os << "EOD\n\n";
}

std::string col(const CsvTable& t, const std::string& name) {
  return std::to_string(t.column(name) + 1);
}

void plot_lines(std::ostringstream& os, const CsvTable& t, const std::string& x,
                const std::vector<std::string>& ys, const char* style) {
  os << "plot ";
  for (std::size_t i = 0; i < ys.size(); ++i) {
    os << (i ? ", \\\n     " : "") << "$data using " << col(t, x) << ':' << col(t, ys[i])
       << " with " << style << " title '" << ys[i] << "'";
  }
  os << "\n\n";
}

}  // namespace

PlotKind detect_plot_kind(const CsvTable& t) {
  if (has(t, "kappa") && has(t, "sup_tau")) return PlotKind::kLemma;
  if (has(t, "kappa")) return PlotKind::kSweep;
  if (has(t, "eps")) return PlotKind::kProbe;
  if (has(t, "n") && !columns_with_suffix(t, "_residual").empty()) return PlotKind::kConvergence;
  if (has(t, "t") && has(t, "rho_min")) return PlotKind::kRun;
  return PlotKind::kUnknown;
}

std::string emit_plot_script(const CsvTable& t, const std::string& name) {
  std::ostringstream os;
  os << "# gnuplot script for " << name << "\n";
  if (t.empty()) {
    os << "# the table has no data rows; nothing to plot\n";
    return os.str();
  }
  const PlotKind kind = detect_plot_kind(t);
  if (kind == PlotKind::kUnknown) {
    os << "# unrecognised table layout; no plot commands emitted\n";
    return os.str();
  }
  os << "set datafile missing 'nan'\n";
  os << "set key outside right\n";
  os << "set grid\n\n";
  datablock(os, t);

  switch (kind) {
    case PlotKind::kSweep: {
      os << "set terminal pngcairo size 900,600\n";
      os << "set output '" << name << "_distance.png'\n";
      os << "set logscale xy\n";
      os << "set xlabel 'kappa'\nset ylabel 'distance to kappa = 0'\n";
      plot_lines(os, t, "kappa", columns_with_prefix(t, "d_"), "linespoints");
      os << "unset logscale\n";
      os << "set output '" << name << "_hoff.png'\n";
      os << "set style data histogram\nset style histogram clustered\n";
      os << "set style fill solid 0.6 border -1\nset logscale y\n";
      os << "set ylabel 'Hoff functional'\n";
      const auto hoff = columns_with_prefix(t, "hoff1.");
      os << "plot ";
      for (std::size_t i = 0; i < hoff.size(); ++i) {
        os << (i ? ", \\\n     " : "") << "$data using " << col(t, hoff[i])
           << ":xtic(" << col(t, "kappa") << ") title '" << hoff[i] << "'";
      }
      os << "\n";
      break;
    }
    case PlotKind::kRun: {
      os << "set terminal pngcairo size 900,600\n";
      os << "set output '" << name << "_extrema.png'\n";
      os << "set xlabel 't'\nset ylabel 'extrema'\n";
      plot_lines(os, t, "t", {"rho_min", "rho_max", "theta_min", "theta_max"}, "lines");
      break;
    }
    case PlotKind::kConvergence: {
      os << "set terminal pngcairo size 900,600\n";
      os << "set output '" << name << "_residuals.png'\n";
      os << "set logscale xy\n";
      os << "set xlabel 'n'\nset ylabel 'max interior residual'\n";
      plot_lines(os, t, "n", columns_with_suffix(t, "_residual"), "linespoints");
      break;
    }
    case PlotKind::kProbe: {
      os << "set terminal pngcairo size 900,600\n";
      os << "set output '" << name << "_probe.png'\n";
      os << "set logscale xy\n";
      os << "set xlabel 'perturbation size'\nset ylabel 'lagrangian_composed distance'\n";
      plot_lines(os, t, "eps", {"distance"}, "linespoints");
      break;
    }
    case PlotKind::kLemma: {
      os << "set terminal pngcairo size 900,600\n";
      os << "set output '" << name << "_tau.png'\n";
      os << "set logscale y\n";
      os << "set xlabel 'kappa'\nset ylabel 'tau'\n";
      plot_lines(os, t, "kappa", {"sup_tau", "tau_bar"}, "linespoints");
      break;
    }
    case PlotKind::kUnknown:
      break;
  }
  return os.str();
}

}  // namespace nsk
