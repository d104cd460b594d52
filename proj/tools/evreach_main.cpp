#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "evreach/errors.hpp"
#include "evreach/pipeline.hpp"

namespace {

// --out beats the EVREACH_OUT environment variable beats the config file.
std::optional<std::filesystem::path> resolve_output_dir(
    const std::string& flag_value) {
  if (!flag_value.empty()) return std::filesystem::path(flag_value);
  if (const char* env = std::getenv("EVREACH_OUT"); env && *env) {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hub-and-spoke EV accessibility analysis over road networks"};
  app.set_version_flag("--version", std::string(evreach::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::string out_dir;
  int workers = -1;
  bool quiet = false;
  bool verbose = false;

  app.add_option("--config", config_path, "run configuration file")
      ->required();
  app.add_option("--out", out_dir, "output directory (overrides config and EVREACH_OUT)");
  app.add_option("--workers", workers, "worker threads (0 = all processors)");
  app.add_flag("--quiet", quiet, "suppress info and warning logging");
  app.add_flag("--verbose", verbose, "log per-step details");

  auto* validate = app.add_subcommand("validate", "check inputs and report data-quality diagnostics");
  auto* analyze = app.add_subcommand("analyze", "run all scenarios and write tables and map layers");
  auto* charge_time = app.add_subcommand("charge-time", "print full-charge waiting times for a vehicle");
  std::string vehicle_name;
  charge_time->add_option("vehicle", vehicle_name, "vehicle name from the config")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return evreach::kExitUsageError;
  }

  evreach::CommandOptions options;
  options.output_dir = resolve_output_dir(out_dir);
  options.workers = workers;
  if (quiet) options.verbosity = evreach::Verbosity::quiet;
  if (verbose) options.verbosity = evreach::Verbosity::verbose;

  evreach::RunConfig config;
  try {
    config = evreach::load_run_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return evreach::kExitUsageError;
  }

  if (validate->parsed()) {
    return evreach::cmd_validate(config, options, std::cerr);
  }
  if (analyze->parsed()) {
    return evreach::cmd_analyze(config, options, std::cerr);
  }
  if (charge_time->parsed()) {
    return evreach::cmd_charge_time(config, vehicle_name, std::cout, std::cerr);
  }
  return evreach::kExitUsageError;
}
