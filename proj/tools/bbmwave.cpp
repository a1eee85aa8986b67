#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "bbmwave/cli/commands.hpp"

namespace {

enum Exit { ok = 0, usage = 1, runtime = 2 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element solver for dispersive shallow water waves"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t snapshot = 0;
  auto* meshgen = app.add_subcommand("meshgen", "generate a mesh from a PGM image or an xyz grid");
  meshgen->add_option("-c,--config", config_path, "configuration file")->required();
  auto* run = app.add_subcommand("run", "simulate a scenario");
  run->add_option("-c,--config", config_path, "configuration file")->required();
  auto* probe = app.add_subcommand("probe", "re-sample the configured gauges from a saved snapshot");
  probe->add_option("-c,--config", config_path, "configuration file")->required();
  probe->add_option("--snapshot", snapshot, "snapshot step number")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  using namespace bbmwave::cli;
  RunConfig config;
  try {
    config = parse_config_file(config_path);
    if (*meshgen) require_for_meshgen(config);
    if (*run) require_for_run(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }

  try {
    if (*meshgen) cmd_meshgen(config, std::cout);
    else if (*run) cmd_run(config, std::cout);
    else cmd_probe(config, snapshot, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return runtime;
  }
  return ok;
}
