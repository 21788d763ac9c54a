#include <CLI11.hpp>
#include <iostream>

#include "nsk/commands.hpp"
#include "nsk/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nskappa: 1D compressible Navier-Stokes kappa-limit laboratory"};
  app.set_version_flag("--version", NSK_VERSION);
  app.require_subcommand(1);

  std::string out_flag;
  app.add_option("-o,--out", out_flag, "output directory (default $NSK_OUT_DIR, then ./nsk_out)");

  std::string config_path;
  auto* run = app.add_subcommand("run", "one trajectory plus the full diagnostics report");
  run->add_option("config", config_path, "config file")->required();
  auto* sweep = app.add_subcommand("sweep", "kappa-limit sweep and optional stability probe");
  sweep->add_option("config", config_path, "config file")->required();
  auto* lemma = app.add_subcommand("lemma17", "ODE bound threshold and verification");
  lemma->add_option("config", config_path, "config file")->required();

  std::string traj_path;
  std::string thresholds_path;
  auto* verify = app.add_subcommand("verify", "re-check a stored trajectory against thresholds");
  verify->add_option("trajectory", traj_path, "trajectory file")->required();
  verify->add_option("thresholds", thresholds_path, "thresholds file")->required();

  std::string csv_path;
  auto* plot = app.add_subcommand("plot", "emit a gnuplot script for a report CSV");
  plot->add_option("csv", csv_path, "report CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? nsk::kExitOk : nsk::kExitUsage;
  }

  const auto out = nsk::resolve_output_dir(out_flag);
  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  return nsk::guarded(name, std::cerr, [&]() -> int {
    if (sub == verify) return nsk::cmd_verify(traj_path, thresholds_path, out, std::cout);
    if (sub == plot) return nsk::cmd_plot(csv_path, out, std::cout);
    const nsk::Config config = nsk::parse_config(config_path);
    if (sub == run) return nsk::cmd_run(config, out, std::cout);
    if (sub == sweep) return nsk::cmd_sweep(config, out, std::cout);
    return nsk::cmd_lemma17(config, out, std::cout);
  });
}
