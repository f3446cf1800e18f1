#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frontgame/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Arrival times of anisotropic forced curvature flow by a discrete game"};
  app.require_subcommand(1);

  std::string config, out_dir = "out", suite, field, mode = "optimal", csv;
  std::vector<double> x;
  double eta = 1e-12;

  auto* solve = app.add_subcommand("solve", "iterate the game operator to its fixed point");
  solve->add_option("config", config, "config file")->required();
  solve->add_option("-o,--out", out_dir, "output directory");

  auto* check = app.add_subcommand("check", "run a verification suite");
  check->add_option("config", config, "config file")->required();
  check->add_option("suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(
          {"contraction", "monotonicity", "consistency", "bound", "wulff", "refine"}));
  check->add_option("-o,--out", out_dir, "output directory");

  auto* rollout = app.add_subcommand("rollout", "play out a game trajectory");
  rollout->add_option("config", config, "config file")->required();
  rollout->add_option("--field", field, "solved field.bin (sidecar .json alongside)");
  rollout->add_option("--x", x, "start point coordinates")->required()->delimiter(',');
  rollout->add_option("--mode", mode, "optimal or concentric")
      ->check(CLI::IsMember({"optimal", "concentric"}));
  rollout->add_option("-o,--out", out_dir, "output directory");

  auto* exporter = app.add_subcommand("export", "convert a raw field to CSV");
  exporter->add_option("field", field, "field.bin")->required();
  exporter->add_option("csv", csv, "output CSV path")->required();
  exporter->add_option("--eta", eta, "u >= 1 - eta is written as inf");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : frontgame::kExitConfig;
  }

  if (*solve) return frontgame::cmd_solve(config, out_dir, std::cerr);
  if (*check) return frontgame::cmd_check(config, suite, out_dir, std::cerr);
  if (*rollout) return frontgame::cmd_rollout(config, field, x, mode, out_dir, std::cerr);
  return frontgame::cmd_export(field, csv, eta, std::cerr);
}
