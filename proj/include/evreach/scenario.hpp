#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evreach/ingest.hpp"
#include "evreach/routing.hpp"

namespace evreach {

// ARIA-style population bands. Both thresholds are inclusive lower bounds:
// pop >= 5000 is a large hub, pop in [1000, 5000) a small hub.
enum class HubClass { large_hub, small_hub, non_hub };

inline constexpr std::int64_t kLargeHubPopulation = 5000;
inline constexpr std::int64_t kSmallHubPopulation = 1000;

HubClass classify_population(std::int64_t population);
std::string hub_class_name(HubClass c);

struct VehicleSpec {
  std::string name;
  double range_km = 0.0;
  double battery_kwh = 0.0;
  double onboard_ac_cap_kw = 0.0;
};

struct ScenarioConfig {
  std::string label;
  std::int64_t hub_population_threshold = kSmallHubPopulation;
  VehicleSpec vehicle;
  double derate_factor = 1.0;  // in (0, 1]
  int max_stop_bucket = 3;
};

struct HubSplit {
  std::vector<std::uint32_t> hub_ids;      // destinations: pop >= threshold
  std::vector<std::uint32_t> non_hub_ids;  // origins
  std::vector<HubClass> classes;           // parallel to the input span
};

// Splits communities into scenario hubs and origins at the configured
// population threshold; also reports each record's fixed ARIA band.
HubSplit classify(std::span<const CommunityRecord> communities,
                  const ScenarioConfig& config);

double effective_range_km(const VehicleSpec& vehicle, double derate_factor);

// Number of en-route full recharges needed to cover distance_km: the
// smallest k >= 0 with distance <= (k+1) * range. Exact range multiples
// resolve downward (d == k*R is coverable with k-1 stops).
std::int64_t stop_count(double distance_km, double effective_range_km);

struct HubAssignment {
  std::uint32_t origin_id = 0;
  bool reachable = false;
  std::uint32_t hub_id = 0;      // valid when reachable
  double distance_km = 0.0;      // valid when reachable
  std::int64_t stops = 0;        // valid when reachable
};

// Nearest-hub assignment for every origin in one multi-source pass.
// Origins with no attachment or in a component with no hub come back with
// reachable = false. Throws ConfigError when no hub has an attachment.
// `snaps` is parallel to `communities` (nullopt = off network).
std::vector<HubAssignment> assign_nearest_hubs(
    const RoadGraph& graph, std::span<const CommunityRecord> communities,
    std::span<const std::optional<SnapResult>> snaps,
    const ScenarioConfig& config);

struct BucketStat {
  std::int64_t towns = 0;
  std::int64_t population = 0;
};

struct BucketHistogram {
  std::vector<BucketStat> stop_buckets;  // index = stop count, 0..max bucket
  BucketStat overflow;                   // stops > max bucket
  BucketStat unreachable;
  BucketStat total;                      // sum of everything above
};

BucketHistogram bucket_assignments(std::span<const HubAssignment> assignments,
                                   std::span<const CommunityRecord> communities,
                                   int max_stop_bucket);

struct HubSpokeStat {
  std::uint32_t hub_id = 0;
  std::int64_t origin_count = 0;
  double mean_distance_km = 0.0;
};

// Mean spoke distance per hub over its assigned reachable origins, sorted
// by hub id. Hubs with no assigned origins are omitted.
std::vector<HubSpokeStat> per_hub_average_spoke_distance(
    std::span<const HubAssignment> assignments);

}  // namespace evreach
