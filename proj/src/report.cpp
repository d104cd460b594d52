#include "evreach/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include "evreach/errors.hpp"
#include "evreach/util.hpp"

namespace evreach {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string bucket_label(int stops) {
  return stops == 0 ? "direct" : std::to_string(stops) + "-stop";
}

TableRow make_row(const std::string& label, const BucketStat& stat,
                  const BucketStat& total) {
  TableRow row;
  row.bucket = label;
  row.towns = stat.towns;
  row.population = stat.population;
  row.towns_pct = round_half_up(
      100.0 * static_cast<double>(stat.towns) / static_cast<double>(total.towns), 2);
  row.population_pct =
      total.population > 0
          ? round_half_up(100.0 * static_cast<double>(stat.population) /
                              static_cast<double>(total.population), 2)
          : 0.0;
  return row;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path.string());
  out << contents;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

AccessibilityTable build_table(const BucketHistogram& histogram,
                               const ScenarioConfig& config) {
  if (histogram.total.towns <= 0) {
    throw DataError("scenario `" + config.label +
                    "`: no non-hub communities, table would be empty");
  }
  AccessibilityTable table;
  table.scenario_label = config.label;
  table.hub_population_threshold = config.hub_population_threshold;
  table.vehicle_range_km = config.vehicle.range_km;
  table.effective_range_km =
      effective_range_km(config.vehicle, config.derate_factor);
  for (std::size_t k = 0; k < histogram.stop_buckets.size(); ++k) {
    table.rows.push_back(make_row(bucket_label(static_cast<int>(k)),
                                  histogram.stop_buckets[k], histogram.total));
  }
  table.rows.push_back(make_row("overflow", histogram.overflow, histogram.total));
  table.rows.push_back(
      make_row("unreachable", histogram.unreachable, histogram.total));
  table.total = make_row("total", histogram.total, histogram.total);
  return table;
}

void export_table_csv(const AccessibilityTable& table,
                      const std::filesystem::path& path) {
  std::string out = "bucket,towns,towns_pct,population,population_pct\n";
  auto append = [&](const TableRow& r) {
    out += csv_escape(r.bucket);
    out += ',' + std::to_string(r.towns);
    out += ',' + format_fixed(r.towns_pct, 2);
    out += ',' + std::to_string(r.population);
    out += ',' + format_fixed(r.population_pct, 2);
    out += '\n';
  };
  for (const auto& r : table.rows) append(r);
  append(table.total);
  write_text_file(path, out);
}

void export_table_json(const AccessibilityTable& table,
                       const std::filesystem::path& path) {
  ordered_json doc;
  doc["scenario"] = table.scenario_label;
  doc["hub_population_threshold"] = table.hub_population_threshold;
  doc["vehicle_range_km"] = table.vehicle_range_km;
  doc["effective_range_km"] = table.effective_range_km;
  auto row_json = [](const TableRow& r) {
    ordered_json j;
    j["bucket"] = r.bucket;
    j["towns"] = r.towns;
    j["towns_pct"] = r.towns_pct;
    j["population"] = r.population;
    j["population_pct"] = r.population_pct;
    return j;
  };
  doc["buckets"] = ordered_json::array();
  for (const auto& r : table.rows) doc["buckets"].push_back(row_json(r));
  doc["total"] = row_json(table.total);
  write_text_file(path, doc.dump(2) + "\n");
}

std::vector<TableRow> parse_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read table: " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "bucket,towns,towns_pct,population,population_pct") {
    throw LoadError(path.string() + ": unexpected table header");
  }
  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw LoadError(path.string() + ": malformed table row `" + line + "`");
    }
    TableRow r;
    r.bucket = fields[0];
    r.towns = std::stoll(fields[1]);
    r.towns_pct = std::stod(fields[2]);
    r.population = std::stoll(fields[3]);
    r.population_pct = std::stod(fields[4]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void export_hub_averages_csv(std::span<const HubSpokeStat> stats,
                             std::span<const CommunityRecord> communities,
                             const std::filesystem::path& path) {
  std::unordered_map<std::uint32_t, const CommunityRecord*> by_id;
  for (const auto& c : communities) by_id[c.id] = &c;
  std::string out = "hub_id,hub_name,origin_count,avg_distance_km\n";
  for (const auto& s : stats) {
    const auto it = by_id.find(s.hub_id);
    const std::string name = it != by_id.end() ? it->second->name : "";
    out += std::to_string(s.hub_id) + ',' + csv_escape(name) + ',' +
           std::to_string(s.origin_count) + ',' +
           format_double(s.mean_distance_km) + '\n';
  }
  write_text_file(path, out);
}

namespace {

ordered_json coord(const LatLon& p) {
  return ordered_json::array({p.lon, p.lat});
}

// Extracts the polyline between arc-length fractions [f0, f1] of an edge.
std::vector<LatLon> sub_polyline(const GraphEdge& e, double f0, double f1) {
  const double a0 = std::clamp(f0, 0.0, 1.0) * e.length_km;
  const double a1 = std::clamp(f1, 0.0, 1.0) * e.length_km;
  if (!(a1 > a0)) return {};
  std::vector<LatLon> pts;
  auto point_at_arc = [&](double arc) {
    auto it = std::upper_bound(e.cum_km.begin(), e.cum_km.end(), arc);
    std::size_t i = it == e.cum_km.begin()
                        ? 0
                        : static_cast<std::size_t>(it - e.cum_km.begin()) - 1;
    i = std::min(i, e.geometry.size() - 2);
    const double seg = e.cum_km[i + 1] - e.cum_km[i];
    const double t = seg > 0.0 ? std::clamp((arc - e.cum_km[i]) / seg, 0.0, 1.0) : 0.0;
    return lerp(e.geometry[i], e.geometry[i + 1], t);
  };
  pts.push_back(point_at_arc(a0));
  for (std::size_t i = 0; i < e.geometry.size(); ++i) {
    if (e.cum_km[i] > a0 && e.cum_km[i] < a1) pts.push_back(e.geometry[i]);
  }
  const LatLon end = point_at_arc(a1);
  if (!(pts.back() == end)) pts.push_back(end);
  if (pts.size() < 2) return {};
  return pts;
}

ordered_json feature_collection(const std::string& name) {
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["name"] = name;
  doc["features"] = ordered_json::array();
  return doc;
}

}  // namespace

std::vector<std::string> export_geojson(const GeoExportInputs& inputs,
                                        const std::filesystem::path& directory) {
  std::unordered_map<std::uint32_t, const CommunityRecord*> by_id;
  std::unordered_map<std::uint32_t, HubClass> class_of;
  for (std::size_t i = 0; i < inputs.communities.size(); ++i) {
    by_id[inputs.communities[i].id] = &inputs.communities[i];
    class_of[inputs.communities[i].id] = inputs.classes[i];
  }
  const std::string& scenario = inputs.scenario->label;

  std::vector<HubAssignment> assignments(inputs.assignments.begin(),
                                         inputs.assignments.end());
  std::sort(assignments.begin(), assignments.end(),
            [](const HubAssignment& a, const HubAssignment& b) {
              return a.origin_id < b.origin_id;
            });

  std::vector<std::string> written;

  ordered_json points = feature_collection("points");
  for (const auto& a : assignments) {
    const CommunityRecord& origin = *by_id.at(a.origin_id);
    ordered_json f;
    f["type"] = "Feature";
    ordered_json props;
    props["scenario"] = scenario;
    props["community_id"] = a.origin_id;
    props["name"] = origin.name;
    props["population"] = origin.population;
    props["hub_class"] = hub_class_name(class_of.at(a.origin_id));
    if (a.reachable) {
      props["nearest_hub"] = by_id.at(a.hub_id)->name;
      props["distance_km"] = a.distance_km;
      props["stops"] = a.stops;
    } else {
      props["nearest_hub"] = nullptr;
      props["distance_km"] = nullptr;
      props["stops"] = "unreachable";
    }
    f["properties"] = std::move(props);
    f["geometry"] = {{"type", "Point"},
                     {"coordinates", coord(origin.position())}};
    points["features"].push_back(std::move(f));
  }
  write_text_file(directory / "points.geojson", points.dump(2) + "\n");
  written.push_back("points.geojson");

  ordered_json lines = feature_collection("hub_lines");
  for (const auto& a : assignments) {
    if (!a.reachable) continue;
    const CommunityRecord& origin = *by_id.at(a.origin_id);
    const CommunityRecord& hub = *by_id.at(a.hub_id);
    ordered_json f;
    f["type"] = "Feature";
    ordered_json props;
    props["scenario"] = scenario;
    props["origin_id"] = a.origin_id;
    props["origin"] = origin.name;
    props["hub_id"] = a.hub_id;
    props["hub"] = hub.name;
    props["distance_km"] = a.distance_km;
    props["stops"] = a.stops;
    f["properties"] = std::move(props);
    f["geometry"] = {
        {"type", "LineString"},
        {"coordinates",
         ordered_json::array({coord(origin.position()), coord(hub.position())})}};
    lines["features"].push_back(std::move(f));
  }
  write_text_file(directory / "hub_lines.geojson", lines.dump(2) + "\n");
  written.push_back("hub_lines.geojson");

  for (std::size_t k = 0; k < inputs.service_areas.size(); ++k) {
    const ServiceArea& area = inputs.service_areas[k];
    const std::string name = "service_area_" + std::to_string(k + 1) + "R";
    ordered_json layer = feature_collection(name);
    ordered_json f;
    f["type"] = "Feature";
    ordered_json props;
    props["scenario"] = scenario;
    props["threshold_km"] = area.threshold_km;
    props["range_multiple"] = static_cast<std::int64_t>(k + 1);
    props["stops"] = static_cast<std::int64_t>(k);
    f["properties"] = std::move(props);
    ordered_json parts = ordered_json::array();
    for (const auto& cov : area.covered) {
      const GraphEdge& e = inputs.graph->edge(cov.edge);
      for (const auto& iv : cov.intervals) {
        const auto pts = sub_polyline(e, iv.lo, iv.hi);
        if (pts.empty()) continue;
        ordered_json part = ordered_json::array();
        for (const auto& p : pts) part.push_back(coord(p));
        parts.push_back(std::move(part));
      }
    }
    f["geometry"] = {{"type", "MultiLineString"},
                     {"coordinates", std::move(parts)}};
    layer["features"].push_back(std::move(f));
    const std::string filename = name + ".geojson";
    write_text_file(directory / filename, layer.dump(2) + "\n");
    written.push_back(filename);
  }
  return written;
}

}  // namespace evreach
