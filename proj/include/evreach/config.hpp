#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "evreach/charging.hpp"
#include "evreach/ingest.hpp"
#include "evreach/scenario.hpp"

namespace evreach {

// Minimal TOML-style document model: scalar/array values, [sections] and
// [[arrays of sections]], one level deep. The exact grammar accepted is
// documented in the README.
struct TomlValue {
  enum class Type { string, integer, real, boolean, array };
  Type type = Type::string;
  std::string str;
  std::int64_t integer = 0;
  double real = 0.0;
  bool boolean = false;
  std::vector<TomlValue> array;

  double as_number() const;  // integer or real
};

struct TomlTable {
  std::map<std::string, TomlValue> values;
  std::map<std::string, TomlTable> tables;
  std::map<std::string, std::vector<TomlTable>> table_arrays;
};

// Throws ConfigError with a line number on any syntax violation.
TomlTable parse_toml(const std::string& text);

struct RunConfig {
  std::filesystem::path communities_path;
  std::filesystem::path roads_path;
  std::filesystem::path output_dir;

  StudyRegion region{-28.0};
  double merge_tolerance_m = 1.0;
  double max_snap_km = 5.0;
  int workers = 0;  // 0 = number of processors
  int oracle_cap = 500;
  LoadMode load_mode = LoadMode::strict;

  std::vector<VehicleSpec> vehicles;
  std::vector<ChargerLevel> chargers;
  std::vector<ScenarioConfig> scenarios;

  const VehicleSpec& vehicle_by_name(const std::string& name) const;
};

// Parses and validates a run configuration. Relative input/output paths
// are resolved against the config file's directory. Unknown keys and
// sections are errors, as are scenarios referencing undefined vehicles.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace evreach
