#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "evreach/charging.hpp"
#include "evreach/road_graph.hpp"
#include "evreach/routing.hpp"
#include "evreach/scenario.hpp"

namespace evreach {

struct TableRow {
  std::string bucket;  // "direct", "1-stop", ..., "overflow", "unreachable"
  std::int64_t towns = 0;
  double towns_pct = 0.0;  // percent of non-hub towns, half-up to 2 decimals
  std::int64_t population = 0;
  double population_pct = 0.0;
};

// Stop-bucket accessibility summary in the shape of the published scenario
// tables: per bucket, town counts and population sums with percentages of
// the scenario's non-hub totals.
struct AccessibilityTable {
  std::string scenario_label;
  std::int64_t hub_population_threshold = 0;
  double vehicle_range_km = 0.0;
  double effective_range_km = 0.0;
  std::vector<TableRow> rows;
  TableRow total;
};

// Throws DataError when the histogram holds zero non-hub towns (the
// percentages would have no denominator).
AccessibilityTable build_table(const BucketHistogram& histogram,
                               const ScenarioConfig& config);

// CSV columns: bucket,towns,towns_pct,population,population_pct.
void export_table_csv(const AccessibilityTable& table,
                      const std::filesystem::path& path);

void export_table_json(const AccessibilityTable& table,
                       const std::filesystem::path& path);

// Re-parses an exported CSV (rows + total). Used by round-trip checks and
// by anything downstream that wants the numbers back.
std::vector<TableRow> parse_table_csv(const std::filesystem::path& path);

void export_hub_averages_csv(std::span<const HubSpokeStat> stats,
                             std::span<const CommunityRecord> communities,
                             const std::filesystem::path& path);

struct GeoExportInputs {
  const RoadGraph* graph = nullptr;
  std::span<const CommunityRecord> communities;  // study-region records
  std::span<const HubClass> classes;             // parallel to communities
  std::span<const HubAssignment> assignments;    // one per non-hub origin
  std::span<const ServiceArea> service_areas;    // ascending thresholds
  const ScenarioConfig* scenario = nullptr;
};

// Writes points.geojson (classified origins), hub_lines.geojson (straight
// origin-to-hub lines for reachable origins) and one
// service_area_<k>R.geojson per threshold. Features are sorted by
// community id and every feature carries the scenario label, so re-running
// produces byte-identical files. Returns the file names written.
std::vector<std::string> export_geojson(const GeoExportInputs& inputs,
                                        const std::filesystem::path& directory);

}  // namespace evreach
