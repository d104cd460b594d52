#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "evreach/config.hpp"

namespace evreach {

inline constexpr const char* kToolName = "evreach";
inline constexpr const char* kToolVersion = "0.1.0";

// Stable CLI exit contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;   // missing/invalid input data
inline constexpr int kExitUsageError = 2;  // bad config or usage

enum class Verbosity { quiet, normal, verbose };

struct CommandOptions {
  std::optional<std::filesystem::path> output_dir;  // overrides the config
  int workers = -1;                                 // -1 = use config value
  Verbosity verbosity = Verbosity::normal;
};

// Checks input files, loads them, and reports data-quality diagnostics
// (snap failures, connectivity, unnoded crossings, per-scenario hub
// counts). Returns 0 iff there were no errors; warnings alone pass.
int cmd_validate(const RunConfig& config, const CommandOptions& options,
                 std::ostream& log);

// Runs every configured scenario and writes tables, per-hub averages and
// GeoJSON layers under the output directory, plus manifest.json. A failing
// scenario aborts the run and removes everything written by this run.
int cmd_analyze(const RunConfig& config, const CommandOptions& options,
                std::ostream& log);

// Prints the per-charger full-charge waiting times for one vehicle.
int cmd_charge_time(const RunConfig& config, const std::string& vehicle_name,
                    std::ostream& out, std::ostream& log);

}  // namespace evreach
