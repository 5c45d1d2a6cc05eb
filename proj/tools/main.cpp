#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  namespace cli = tactile::cli;

  CLI::App app{"Tactile internet hardware reference model"};
  app.require_subcommand(1);

  std::string scenario;
  auto* run = app.add_subcommand("run", "Simulate a scenario, write traces and summary");
  run->add_option("scenario", scenario, "Scenario YAML file")->required();

  std::string targets;
  auto* latency = app.add_subcommand("latency", "Calibrate the latency model");
  latency->add_option("--targets", targets,
                      "JSON object of module targets in ns (path or inline)");

  std::string trace_a;
  std::string trace_b;
  auto* mse = app.add_subcommand("mse", "Per-column MSE between two traces");
  mse->add_option("a", trace_a, "First trace CSV")->required();
  mse->add_option("b", trace_b, "Second trace CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  if (run->parsed()) return cli::cmd_run(scenario, std::cout, std::cerr);
  if (latency->parsed()) return cli::cmd_latency(targets, std::cout, std::cerr);
  return cli::cmd_mse(trace_a, trace_b, std::cout, std::cerr);
}
