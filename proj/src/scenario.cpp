#include "evreach/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "evreach/errors.hpp"

namespace evreach {

HubClass classify_population(std::int64_t population) {
  if (population >= kLargeHubPopulation) return HubClass::large_hub;
  if (population >= kSmallHubPopulation) return HubClass::small_hub;
  return HubClass::non_hub;
}

std::string hub_class_name(HubClass c) {
  switch (c) {
    case HubClass::large_hub: return "large_hub";
    case HubClass::small_hub: return "small_hub";
    case HubClass::non_hub: return "non_hub";
  }
  return "non_hub";
}

HubSplit classify(std::span<const CommunityRecord> communities,
                  const ScenarioConfig& config) {
  HubSplit split;
  split.classes.reserve(communities.size());
  for (const auto& c : communities) {
    split.classes.push_back(classify_population(c.population));
    if (c.population >= config.hub_population_threshold) {
      split.hub_ids.push_back(c.id);
    } else {
      split.non_hub_ids.push_back(c.id);
    }
  }
  return split;
}

double effective_range_km(const VehicleSpec& vehicle, double derate_factor) {
  if (!(derate_factor > 0.0 && derate_factor <= 1.0)) {
    throw ConfigError("derate_factor must be in (0, 1], got " +
                      std::to_string(derate_factor));
  }
  return vehicle.range_km * derate_factor;
}

std::int64_t stop_count(double distance_km, double effective_range) {
  // Search near floor(d/R) with multiplication on the comparison side, so
  // exact multiples (d == k*R) land on k-1 without division jitter.
  std::int64_t k = static_cast<std::int64_t>(
      std::floor(distance_km / effective_range));
  k = std::max<std::int64_t>(0, k - 2);
  while (distance_km > static_cast<double>(k + 1) * effective_range) ++k;
  return k;
}

std::vector<HubAssignment> assign_nearest_hubs(
    const RoadGraph& graph, std::span<const CommunityRecord> communities,
    std::span<const std::optional<SnapResult>> snaps,
    const ScenarioConfig& config) {
  const HubSplit split = classify(communities, config);
  if (split.hub_ids.empty()) {
    throw ConfigError("scenario `" + config.label +
                      "`: no community reaches the hub population threshold");
  }

  std::unordered_map<std::uint32_t, std::size_t> index_of_id;
  for (std::size_t i = 0; i < communities.size(); ++i) {
    index_of_id[communities[i].id] = i;
  }

  std::vector<SourcePoint> hub_sources;
  for (std::uint32_t hub_id : split.hub_ids) {
    const auto& snap = snaps[index_of_id.at(hub_id)];
    if (snap) hub_sources.push_back({hub_id, snap->attachment});
  }
  if (hub_sources.empty()) {
    throw ConfigError("scenario `" + config.label +
                      "`: no hub could be attached to the road network");
  }

  const DistanceLabeling labeling = multi_source_labeling(graph, hub_sources);
  const double range = effective_range_km(config.vehicle, config.derate_factor);

  std::vector<HubAssignment> assignments;
  assignments.reserve(split.non_hub_ids.size());
  for (std::uint32_t origin_id : split.non_hub_ids) {
    HubAssignment a;
    a.origin_id = origin_id;
    const auto& snap = snaps[index_of_id.at(origin_id)];
    if (snap) {
      const auto label = labeling.at(graph, snap->attachment);
      if (label.reachable) {
        a.reachable = true;
        a.hub_id = static_cast<std::uint32_t>(label.source_id);
        a.distance_km = label.distance_km;
        a.stops = stop_count(label.distance_km, range);
      }
    }
    assignments.push_back(a);
  }
  return assignments;
}

BucketHistogram bucket_assignments(std::span<const HubAssignment> assignments,
                                   std::span<const CommunityRecord> communities,
                                   int max_stop_bucket) {
  std::unordered_map<std::uint32_t, std::int64_t> population_of;
  for (const auto& c : communities) population_of[c.id] = c.population;

  BucketHistogram hist;
  hist.stop_buckets.assign(static_cast<std::size_t>(max_stop_bucket) + 1, {});
  for (const auto& a : assignments) {
    const std::int64_t pop = population_of.at(a.origin_id);
    BucketStat* bucket = nullptr;
    if (!a.reachable) {
      bucket = &hist.unreachable;
    } else if (a.stops > max_stop_bucket) {
      bucket = &hist.overflow;
    } else {
      bucket = &hist.stop_buckets[static_cast<std::size_t>(a.stops)];
    }
    bucket->towns += 1;
    bucket->population += pop;
    hist.total.towns += 1;
    hist.total.population += pop;
  }
  return hist;
}

std::vector<HubSpokeStat> per_hub_average_spoke_distance(
    std::span<const HubAssignment> assignments) {
  std::map<std::uint32_t, std::pair<std::int64_t, double>> acc;
  for (const auto& a : assignments) {
    if (!a.reachable) continue;
    auto& [count, sum] = acc[a.hub_id];
    count += 1;
    sum += a.distance_km;
  }
  std::vector<HubSpokeStat> stats;
  stats.reserve(acc.size());
  for (const auto& [hub_id, cs] : acc) {
    stats.push_back({hub_id, cs.first, cs.second / static_cast<double>(cs.first)});
  }
  return stats;
}

}  // namespace evreach
