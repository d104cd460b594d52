#include "evreach/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <unordered_map>

#include "evreach/errors.hpp"
#include "evreach/report.hpp"
#include "evreach/util.hpp"

namespace evreach {

namespace {

using ordered_json = nlohmann::ordered_json;

class Log {
 public:
  Log(std::ostream& out, Verbosity v) : out_(out), verbosity_(v) {}

  void info(const std::string& msg) {
    if (verbosity_ != Verbosity::quiet) out_ << "info: " << msg << "\n";
  }
  void detail(const std::string& msg) {
    if (verbosity_ == Verbosity::verbose) out_ << "debug: " << msg << "\n";
  }
  void warn(const std::string& msg) {
    if (verbosity_ != Verbosity::quiet) out_ << "warning: " << msg << "\n";
    warnings_.push_back(msg);
  }
  void error(const std::string& msg) {
    out_ << "error: " << msg << "\n";
    ++errors_;
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  int errors() const { return errors_; }

 private:
  std::ostream& out_;
  Verbosity verbosity_;
  std::vector<std::string> warnings_;
  int errors_ = 0;
};

struct LoadedInputs {
  std::vector<CommunityRecord> communities;  // study region only
  std::vector<CommunityRecord> excluded;     // south of the latitude filter
  RoadGraph graph;
  std::vector<std::optional<SnapResult>> snaps;  // parallel to communities
};

// Shared by validate and analyze: load, filter, build, snap. Data-quality
// findings go through the log; hard failures throw.
LoadedInputs load_inputs(const RunConfig& config, int workers, Log& log) {
  LoadedInputs inputs;

  auto communities = load_communities(config.communities_path, config.load_mode);
  for (const auto& e : communities.errors) {
    log.warn(config.communities_path.string() + ":" + std::to_string(e.line) +
             ": " + e.message + " (row skipped)");
  }
  for (const auto& w : communities.warnings) log.warn(w);
  log.detail(std::to_string(communities.records.size()) + " communities loaded");

  auto split = filter_study_region(communities.records, config.region);
  inputs.communities = std::move(split.kept);
  inputs.excluded = std::move(split.excluded);
  log.detail(std::to_string(inputs.excluded.size()) +
             " communities south of the study region excluded");

  auto roads = load_roads(config.roads_path);
  for (const auto& w : roads.warnings) log.warn(w);
  log.detail(std::to_string(roads.features.size()) + " road features loaded");

  auto build = build_graph(roads.features, config.merge_tolerance_m);
  for (const auto& w : build.warnings) log.warn(w);
  inputs.graph = std::move(build.graph);
  log.detail(std::to_string(inputs.graph.nodes().size()) + " nodes, " +
             std::to_string(inputs.graph.edges().size()) + " edges");

  inputs.snaps.resize(inputs.communities.size());
  parallel_for(inputs.communities.size(), workers, [&](std::size_t i) {
    const auto& c = inputs.communities[i];
    inputs.snaps[i] =
        snap_point(inputs.graph, c.id, c.position(), config.max_snap_km);
  });
  for (std::size_t i = 0; i < inputs.communities.size(); ++i) {
    if (!inputs.snaps[i]) {
      log.warn("community `" + inputs.communities[i].name +
               "` is farther than " + format_double(config.max_snap_km) +
               " km from any road; treated as off-network");
    }
  }
  return inputs;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitUsageError;
  return kExitDataError;
}

int effective_workers(const RunConfig& config, const CommandOptions& options) {
  return options.workers >= 0 ? options.workers : config.workers;
}

}  // namespace

int cmd_validate(const RunConfig& config, const CommandOptions& options,
                 std::ostream& out) {
  Log log(out, options.verbosity);

  for (const auto& [label, path] :
       std::initializer_list<std::pair<const char*, std::filesystem::path>>{
           {"communities", config.communities_path},
           {"roads", config.roads_path}}) {
    if (!std::filesystem::exists(path)) {
      log.error(std::string(label) + " file does not exist: " + path.string());
    }
  }
  if (log.errors() > 0) return kExitDataError;

  LoadedInputs inputs;
  try {
    inputs = load_inputs(config, effective_workers(config, options), log);
  } catch (const std::exception& e) {
    log.error(e.what());
    return exit_code_for(e);
  }

  if (inputs.communities.empty()) {
    log.error("no communities remain inside the study region");
  }

  // Connectivity: flag communities scattered across multiple components.
  if (!inputs.graph.empty()) {
    const auto labels = connected_components(inputs.graph);
    std::set<NodeId> used;
    for (const auto& snap : inputs.snaps) {
      if (!snap) continue;
      const auto& at = snap->attachment;
      used.insert(labels[at.kind == Attachment::Kind::node
                             ? at.node
                             : inputs.graph.edge(at.edge).node_a]);
    }
    if (used.size() > 1) {
      log.warn("snapped communities span " + std::to_string(used.size()) +
               " disconnected road components; some hubs may be unreachable");
    }
  } else {
    log.error("road network is empty after graph construction");
  }

  for (const auto& w : unnoded_crossing_warnings(inputs.graph)) log.warn(w);

  for (const auto& scenario : config.scenarios) {
    const HubSplit split = classify(inputs.communities, scenario);
    if (split.hub_ids.empty()) {
      log.error("scenario `" + scenario.label +
                "`: no community reaches the hub threshold " +
                std::to_string(scenario.hub_population_threshold));
      continue;
    }
    if (split.non_hub_ids.empty()) {
      log.error("scenario `" + scenario.label +
                "`: every community is a hub; nothing to analyze");
      continue;
    }
    std::unordered_map<std::uint32_t, std::size_t> index_of_id;
    for (std::size_t i = 0; i < inputs.communities.size(); ++i) {
      index_of_id[inputs.communities[i].id] = i;
    }
    std::size_t snapped_hubs = 0;
    for (auto hub_id : split.hub_ids) {
      if (inputs.snaps[index_of_id[hub_id]]) ++snapped_hubs;
    }
    if (snapped_hubs == 0) {
      log.error("scenario `" + scenario.label +
                "`: no hub could be attached to the road network");
    } else if (snapped_hubs < split.hub_ids.size()) {
      log.warn("scenario `" + scenario.label + "`: " +
               std::to_string(split.hub_ids.size() - snapped_hubs) +
               " hub(s) are off-network and unusable as destinations");
    }
    log.info("scenario `" + scenario.label + "`: " +
             std::to_string(split.hub_ids.size()) + " hubs, " +
             std::to_string(split.non_hub_ids.size()) + " origins");
  }

  if (log.errors() > 0) return kExitDataError;
  log.info("validation passed");
  return kExitOk;
}

namespace {

// Collects files written by one analyze run so a failing scenario can take
// its partial outputs with it.
class OutputTracker {
 public:
  void record(const std::filesystem::path& p) { files_.push_back(p); }
  void record_dir(const std::filesystem::path& p) { dirs_.push_back(p); }

  void cleanup() {
    std::error_code ec;
    for (const auto& f : files_) std::filesystem::remove(f, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) {
      if (std::filesystem::is_empty(*it, ec)) std::filesystem::remove(*it, ec);
    }
  }

 private:
  std::vector<std::filesystem::path> files_;
  std::vector<std::filesystem::path> dirs_;
};

ordered_json config_echo(const RunConfig& config, int workers) {
  ordered_json echo;
  echo["paths"] = {{"communities", config.communities_path.string()},
                   {"roads", config.roads_path.string()},
                   {"output_dir", config.output_dir.string()}};
  echo["study_region"] = {{"min_latitude", config.region.min_latitude}};
  echo["tolerances"] = {{"merge_tolerance_m", config.merge_tolerance_m},
                        {"max_snap_km", config.max_snap_km}};
  echo["engine"] = {
      {"workers", workers},
      {"oracle_cap", config.oracle_cap},
      {"load_mode", config.load_mode == LoadMode::strict ? "strict" : "lenient"}};
  echo["vehicles"] = ordered_json::array();
  for (const auto& v : config.vehicles) {
    echo["vehicles"].push_back({{"name", v.name},
                                {"range_km", v.range_km},
                                {"battery_kwh", v.battery_kwh},
                                {"onboard_ac_cap_kw", v.onboard_ac_cap_kw}});
  }
  echo["chargers"] = ordered_json::array();
  for (const auto& c : config.chargers) {
    echo["chargers"].push_back(
        {{"label", c.label},
         {"power_kw", c.power_kw},
         {"coupling", c.coupling == Coupling::ac ? "AC" : "DC"}});
  }
  echo["scenarios"] = ordered_json::array();
  for (const auto& s : config.scenarios) {
    echo["scenarios"].push_back(
        {{"label", s.label},
         {"hub_population_threshold", s.hub_population_threshold},
         {"vehicle", s.vehicle.name},
         {"derate_factor", s.derate_factor},
         {"max_stop_bucket", s.max_stop_bucket}});
  }
  return echo;
}

}  // namespace

int cmd_analyze(const RunConfig& config, const CommandOptions& options,
                std::ostream& out) {
  Log log(out, options.verbosity);
  const int workers = effective_workers(config, options);
  const std::filesystem::path out_dir =
      options.output_dir.value_or(config.output_dir);

  const auto t_start = std::chrono::steady_clock::now();
  OutputTracker tracker;
  try {
    ordered_json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["inputs"] = {
        {"communities",
         {{"path", config.communities_path.string()},
          {"sha256", sha256_file(config.communities_path)}}},
        {"roads",
         {{"path", config.roads_path.string()},
          {"sha256", sha256_file(config.roads_path)}}}};
    manifest["config"] = config_echo(config, workers);

    LoadedInputs inputs = load_inputs(config, workers, log);
    if (inputs.communities.empty()) {
      throw DataError("no communities remain inside the study region");
    }

    std::filesystem::create_directories(out_dir);
    manifest["scenarios"] = ordered_json::array();
    std::map<std::string, double> scenario_ms;

    for (const auto& scenario : config.scenarios) {
      const auto t_scenario = std::chrono::steady_clock::now();
      log.info("scenario `" + scenario.label + "`: analyzing");

      const HubSplit split = classify(inputs.communities, scenario);
      const auto assignments = assign_nearest_hubs(
          inputs.graph, inputs.communities, inputs.snaps, scenario);
      const auto histogram = bucket_assignments(assignments, inputs.communities,
                                                scenario.max_stop_bucket);
      const AccessibilityTable table = build_table(histogram, scenario);
      const auto spoke_stats = per_hub_average_spoke_distance(assignments);

      // Service areas at 1..(max bucket + 1) effective-range multiples,
      // i.e. the network coverable with 0..max bucket recharge stops.
      std::vector<SourcePoint> hub_sources;
      std::unordered_map<std::uint32_t, std::size_t> index_of_id;
      for (std::size_t i = 0; i < inputs.communities.size(); ++i) {
        index_of_id[inputs.communities[i].id] = i;
      }
      for (auto hub_id : split.hub_ids) {
        const auto& snap = inputs.snaps[index_of_id[hub_id]];
        if (snap) hub_sources.push_back({hub_id, snap->attachment});
      }
      const double range =
          effective_range_km(scenario.vehicle, scenario.derate_factor);
      std::vector<double> thresholds;
      for (int k = 1; k <= scenario.max_stop_bucket + 1; ++k) {
        thresholds.push_back(static_cast<double>(k) * range);
      }
      const auto areas =
          service_area(inputs.graph, hub_sources, thresholds, workers);

      const std::filesystem::path dir = out_dir / scenario.label;
      std::filesystem::create_directories(dir);
      tracker.record_dir(dir);

      ordered_json entry;
      entry["label"] = scenario.label;
      entry["directory"] = scenario.label;
      entry["files"] = ordered_json::array();
      auto record = [&](const std::string& filename) {
        tracker.record(dir / filename);
        entry["files"].push_back(filename);
      };

      export_table_csv(table, dir / "table.csv");
      record("table.csv");
      export_table_json(table, dir / "table.json");
      record("table.json");
      export_hub_averages_csv(spoke_stats, inputs.communities,
                              dir / "hub_average_spoke_km.csv");
      record("hub_average_spoke_km.csv");

      GeoExportInputs geo;
      geo.graph = &inputs.graph;
      geo.communities = inputs.communities;
      geo.classes = split.classes;
      geo.assignments = assignments;
      geo.service_areas = areas;
      geo.scenario = &scenario;
      for (const auto& filename : export_geojson(geo, dir)) record(filename);

      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t_scenario)
                            .count();
      scenario_ms[scenario.label] = ms;
      manifest["scenarios"].push_back(std::move(entry));
      log.info("scenario `" + scenario.label + "`: " +
               std::to_string(histogram.total.towns) + " origins bucketed");
    }

    manifest["warnings"] = log.warnings();
    ordered_json timing;
    timing["total_ms"] = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t_start)
                             .count();
    for (const auto& [label, ms] : scenario_ms) timing[label + "_ms"] = ms;
    manifest["timing"] = std::move(timing);

    std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
    if (!mf) throw IoError("cannot write manifest: " + (out_dir / "manifest.json").string());
    mf << manifest.dump(2) << "\n";
    log.info("analysis complete: " + out_dir.string());
    return kExitOk;
  } catch (const std::exception& e) {
    log.error(e.what());
    log.info("cleaning up partial outputs");
    tracker.cleanup();
    return exit_code_for(e);
  }
}

int cmd_charge_time(const RunConfig& config, const std::string& vehicle_name,
                    std::ostream& out, std::ostream& log_stream) {
  Log log(log_stream, Verbosity::normal);
  try {
    const VehicleSpec& vehicle = config.vehicle_by_name(vehicle_name);
    out << "vehicle: " << vehicle.name << " (battery "
        << format_double(vehicle.battery_kwh) << " kWh, range "
        << format_double(vehicle.range_km) << " km, onboard AC cap "
        << format_double(vehicle.onboard_ac_cap_kw) << " kW)\n";
    char line[128];
    std::snprintf(line, sizeof(line), "%-14s %10s %13s  %s\n", "charger",
                  "power_kw", "effective_kw", "full_charge");
    out << line;
    for (const auto& charger : config.chargers) {
      const auto estimate = full_charge_time(vehicle, charger);
      std::snprintf(line, sizeof(line), "%-14s %10s %13s  %s\n",
                    charger.label.c_str(),
                    format_double(charger.power_kw).c_str(),
                    format_double(estimate.effective_power_kw).c_str(),
                    format_duration(estimate.duration_minutes, true).c_str());
      out << line;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    log.error(e.what());
    // Unknown vehicle is a data-level failure per the CLI contract.
    return kExitDataError;
  }
}

}  // namespace evreach
