#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "evreach/charging.hpp"
#include "evreach/config.hpp"
#include "evreach/errors.hpp"
#include "evreach/pipeline.hpp"
#include "evreach/report.hpp"

namespace py = pybind11;
using namespace evreach;

namespace {

LatLon to_latlon(const std::pair<double, double>& p) {
  return {p.first, p.second};
}

std::pair<double, double> from_latlon(const LatLon& p) {
  return {p.lat, p.lon};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "road-network hub accessibility analysis for electric vehicles";
  m.attr("__version__") = kToolVersion;
  m.attr("EARTH_RADIUS_KM") = kEarthRadiusKm;

  py::register_exception<LoadError>(m, "LoadError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<OracleCapError>(m, "OracleCapError", PyExc_RuntimeError);

  // geo
  m.def(
      "haversine_km",
      [](std::pair<double, double> a, std::pair<double, double> b) {
        return haversine_km(to_latlon(a), to_latlon(b));
      },
      py::arg("a"), py::arg("b"),
      "great-circle distance in km between (lat, lon) pairs");

  // ingest
  py::class_<CommunityRecord>(m, "CommunityRecord")
      .def(py::init([](std::uint32_t id, const std::string& name, double lat,
                       double lon, std::int64_t population) {
             return CommunityRecord{id, name, lat, lon, population};
           }),
           py::arg("id"), py::arg("name"), py::arg("latitude"),
           py::arg("longitude"), py::arg("population"))
      .def_readonly("id", &CommunityRecord::id)
      .def_readonly("name", &CommunityRecord::name)
      .def_readonly("latitude", &CommunityRecord::latitude)
      .def_readonly("longitude", &CommunityRecord::longitude)
      .def_readonly("population", &CommunityRecord::population)
      .def("__repr__", [](const CommunityRecord& c) {
        return "CommunityRecord(" + std::to_string(c.id) + ", '" + c.name +
               "', pop=" + std::to_string(c.population) + ")";
      });

  py::class_<RoadFeature>(m, "RoadFeature")
      .def(py::init([](const std::vector<std::pair<double, double>>& geometry,
                       const std::string& source_id) {
             RoadFeature f;
             for (const auto& p : geometry) f.geometry.push_back(to_latlon(p));
             f.source_id = source_id;
             return f;
           }),
           py::arg("geometry"), py::arg("source_id") = "")
      .def_property_readonly("geometry",
                             [](const RoadFeature& f) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& p : f.geometry)
                                 out.push_back(from_latlon(p));
                               return out;
                             })
      .def_readonly("source_id", &RoadFeature::source_id);

  m.def(
      "load_communities",
      [](const std::filesystem::path& path, bool lenient) {
        auto result = load_communities(
            path, lenient ? LoadMode::lenient : LoadMode::strict);
        std::vector<std::pair<std::size_t, std::string>> errors;
        for (const auto& e : result.errors) errors.emplace_back(e.line, e.message);
        return py::make_tuple(result.records, errors, result.warnings);
      },
      py::arg("path"), py::arg("lenient") = false,
      "returns (records, row_errors, warnings)");
  m.def(
      "load_roads",
      [](const std::filesystem::path& path) {
        auto result = load_roads(path);
        return py::make_tuple(result.features, result.warnings);
      },
      py::arg("path"), "returns (features, warnings)");
  m.def(
      "filter_study_region",
      [](const std::vector<CommunityRecord>& communities, double min_latitude) {
        auto split = filter_study_region(communities, {min_latitude});
        return py::make_tuple(split.kept, split.excluded);
      },
      py::arg("communities"), py::arg("min_latitude"),
      "returns (kept, excluded)");

  // graph
  py::class_<RoadGraph>(m, "RoadGraph")
      .def_property_readonly(
          "node_count", [](const RoadGraph& g) { return g.nodes().size(); })
      .def_property_readonly(
          "edge_count", [](const RoadGraph& g) { return g.edges().size(); })
      .def("node_position",
           [](const RoadGraph& g, NodeId id) { return from_latlon(g.node(id).pos); })
      .def("edge_length_km",
           [](const RoadGraph& g, EdgeId id) { return g.edge(id).length_km; })
      .def("edge_nodes", [](const RoadGraph& g, EdgeId id) {
        return std::pair{g.edge(id).node_a, g.edge(id).node_b};
      });

  py::class_<Attachment> attachment(m, "Attachment");
  attachment
      .def_static("at_node", &Attachment::at_node, py::arg("node"))
      .def_static("on_edge", &Attachment::on_edge, py::arg("edge"),
                  py::arg("fraction"))
      .def_property_readonly("is_node",
                             [](const Attachment& a) {
                               return a.kind == Attachment::Kind::node;
                             })
      .def_readonly("node", &Attachment::node)
      .def_readonly("edge", &Attachment::edge)
      .def_readonly("fraction", &Attachment::fraction);

  py::class_<SnapResult>(m, "SnapResult")
      .def_readonly("community_id", &SnapResult::community_id)
      .def_readonly("attachment", &SnapResult::attachment)
      .def_property_readonly(
          "point", [](const SnapResult& s) { return from_latlon(s.point); })
      .def_readonly("snap_distance_km", &SnapResult::snap_distance_km);

  m.def(
      "build_graph",
      [](const std::vector<RoadFeature>& roads, double merge_tolerance_m) {
        auto result = build_graph(roads, merge_tolerance_m);
        return py::make_tuple(std::move(result.graph), result.warnings);
      },
      py::arg("roads"), py::arg("merge_tolerance_m") = 1.0,
      "returns (graph, warnings)");
  m.def(
      "snap_point",
      [](const RoadGraph& graph, std::pair<double, double> point,
         double max_snap_km, std::uint32_t community_id) {
        return snap_point(graph, community_id, to_latlon(point), max_snap_km);
      },
      py::arg("graph"), py::arg("point"), py::arg("max_snap_km") = 5.0,
      py::arg("community_id") = 0);
  m.def("connected_components", &connected_components, py::arg("graph"),
        "per-node component labels (smallest node id in the component)");

  // routing
  py::class_<SourcePoint>(m, "SourcePoint")
      .def(py::init([](std::uint64_t id, const Attachment& at) {
             return SourcePoint{id, at};
           }),
           py::arg("id"), py::arg("attachment"))
      .def_readonly("id", &SourcePoint::id)
      .def_readonly("attachment", &SourcePoint::attachment);

  py::class_<DistanceLabeling>(m, "DistanceLabeling")
      .def("node_reachable", &DistanceLabeling::node_reachable)
      .def("node_distance_km", &DistanceLabeling::node_distance_km)
      .def("node_source_id", &DistanceLabeling::node_source_id)
      .def(
          "at",
          [](const DistanceLabeling& labeling, const RoadGraph& graph,
             const Attachment& at) -> std::optional<std::pair<double, std::uint64_t>> {
            const auto label = labeling.at(graph, at);
            if (!label.reachable) return std::nullopt;
            return std::pair{label.distance_km, label.source_id};
          },
          py::arg("graph"), py::arg("attachment"),
          "(distance_km, source_id) or None when unreachable");

  m.def("shortest_paths_from", &shortest_paths_from, py::arg("graph"),
        py::arg("source"));
  m.def(
      "multi_source_labeling",
      [](const RoadGraph& graph, const std::vector<SourcePoint>& sources) {
        return multi_source_labeling(graph, sources);
      },
      py::arg("graph"), py::arg("sources"));

  py::class_<ODMatrix>(m, "ODMatrix")
      .def_property_readonly("origin_ids", &ODMatrix::origin_ids)
      .def_property_readonly("destination_ids", &ODMatrix::destination_ids)
      .def(
          "distance_km",
          [](const ODMatrix& matrix, std::size_t o,
             std::size_t d) -> std::optional<double> {
            if (!matrix.reachable(o, d)) return std::nullopt;
            return matrix.distance_km(o, d);
          },
          py::arg("origin_index"), py::arg("destination_index"),
          "distance or None when unreachable");

  m.def(
      "od_matrix",
      [](const RoadGraph& graph, const std::vector<SourcePoint>& origins,
         const std::vector<SourcePoint>& destinations, int workers) {
        return od_matrix(graph, origins, destinations, workers);
      },
      py::arg("graph"), py::arg("origins"), py::arg("destinations"),
      py::arg("workers") = 1);

  py::class_<EdgeInterval>(m, "EdgeInterval")
      .def_readonly("lo", &EdgeInterval::lo)
      .def_readonly("hi", &EdgeInterval::hi);
  py::class_<EdgeCoverage>(m, "EdgeCoverage")
      .def_readonly("edge", &EdgeCoverage::edge)
      .def_readonly("intervals", &EdgeCoverage::intervals);
  py::class_<ServiceArea>(m, "ServiceArea")
      .def_readonly("threshold_km", &ServiceArea::threshold_km)
      .def_readonly("covered", &ServiceArea::covered);

  m.def(
      "service_area",
      [](const RoadGraph& graph, const std::vector<SourcePoint>& sources,
         const std::vector<double>& thresholds, int workers) {
        return service_area(graph, sources, thresholds, workers);
      },
      py::arg("graph"), py::arg("sources"), py::arg("thresholds"),
      py::arg("workers") = 1);
  m.def("all_pairs_oracle", &all_pairs_oracle, py::arg("graph"),
        py::arg("node_cap") = 500,
        "row-major all-pairs distances; +inf where unreachable");

  // scenario
  py::enum_<HubClass>(m, "HubClass")
      .value("LARGE_HUB", HubClass::large_hub)
      .value("SMALL_HUB", HubClass::small_hub)
      .value("NON_HUB", HubClass::non_hub);

  py::class_<VehicleSpec>(m, "VehicleSpec")
      .def(py::init([](const std::string& name, double range_km,
                       double battery_kwh, double onboard_ac_cap_kw) {
             return VehicleSpec{name, range_km, battery_kwh, onboard_ac_cap_kw};
           }),
           py::arg("name"), py::arg("range_km"), py::arg("battery_kwh"),
           py::arg("onboard_ac_cap_kw"))
      .def_readonly("name", &VehicleSpec::name)
      .def_readonly("range_km", &VehicleSpec::range_km)
      .def_readonly("battery_kwh", &VehicleSpec::battery_kwh)
      .def_readonly("onboard_ac_cap_kw", &VehicleSpec::onboard_ac_cap_kw);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init([](const std::string& label, std::int64_t threshold,
                       const VehicleSpec& vehicle, double derate_factor,
                       int max_stop_bucket) {
             return ScenarioConfig{label, threshold, vehicle, derate_factor,
                                   max_stop_bucket};
           }),
           py::arg("label"), py::arg("hub_population_threshold"),
           py::arg("vehicle"), py::arg("derate_factor") = 1.0,
           py::arg("max_stop_bucket") = 3)
      .def_readonly("label", &ScenarioConfig::label)
      .def_readonly("hub_population_threshold",
                    &ScenarioConfig::hub_population_threshold)
      .def_readonly("vehicle", &ScenarioConfig::vehicle)
      .def_readonly("derate_factor", &ScenarioConfig::derate_factor)
      .def_readonly("max_stop_bucket", &ScenarioConfig::max_stop_bucket);

  m.def("classify_population", &classify_population, py::arg("population"));
  m.def(
      "classify",
      [](const std::vector<CommunityRecord>& communities,
         const ScenarioConfig& config) {
        auto split = classify(communities, config);
        return py::make_tuple(split.hub_ids, split.non_hub_ids, split.classes);
      },
      py::arg("communities"), py::arg("config"),
      "returns (hub_ids, non_hub_ids, classes)");
  m.def("effective_range_km", &effective_range_km, py::arg("vehicle"),
        py::arg("derate_factor") = 1.0);
  m.def("stop_count", &stop_count, py::arg("distance_km"),
        py::arg("effective_range_km"));

  py::class_<HubAssignment>(m, "HubAssignment")
      .def_readonly("origin_id", &HubAssignment::origin_id)
      .def_readonly("reachable", &HubAssignment::reachable)
      .def_readonly("hub_id", &HubAssignment::hub_id)
      .def_readonly("distance_km", &HubAssignment::distance_km)
      .def_readonly("stops", &HubAssignment::stops);

  m.def(
      "assign_nearest_hubs",
      [](const RoadGraph& graph, const std::vector<CommunityRecord>& communities,
         const std::vector<std::optional<SnapResult>>& snaps,
         const ScenarioConfig& config) {
        return assign_nearest_hubs(graph, communities, snaps, config);
      },
      py::arg("graph"), py::arg("communities"), py::arg("snaps"),
      py::arg("config"));

  py::class_<BucketStat>(m, "BucketStat")
      .def_readonly("towns", &BucketStat::towns)
      .def_readonly("population", &BucketStat::population);
  py::class_<BucketHistogram>(m, "BucketHistogram")
      .def_readonly("stop_buckets", &BucketHistogram::stop_buckets)
      .def_readonly("overflow", &BucketHistogram::overflow)
      .def_readonly("unreachable", &BucketHistogram::unreachable)
      .def_readonly("total", &BucketHistogram::total);

  m.def(
      "bucket_assignments",
      [](const std::vector<HubAssignment>& assignments,
         const std::vector<CommunityRecord>& communities, int max_stop_bucket) {
        return bucket_assignments(assignments, communities, max_stop_bucket);
      },
      py::arg("assignments"), py::arg("communities"),
      py::arg("max_stop_bucket") = 3);

  py::class_<HubSpokeStat>(m, "HubSpokeStat")
      .def_readonly("hub_id", &HubSpokeStat::hub_id)
      .def_readonly("origin_count", &HubSpokeStat::origin_count)
      .def_readonly("mean_distance_km", &HubSpokeStat::mean_distance_km);
  m.def(
      "per_hub_average_spoke_distance",
      [](const std::vector<HubAssignment>& assignments) {
        return per_hub_average_spoke_distance(assignments);
      },
      py::arg("assignments"));

  // charging
  py::enum_<Coupling>(m, "Coupling")
      .value("AC", Coupling::ac)
      .value("DC", Coupling::dc);
  py::class_<ChargerLevel>(m, "ChargerLevel")
      .def(py::init([](const std::string& label, double power_kw, Coupling c) {
             return ChargerLevel{label, power_kw, c};
           }),
           py::arg("label"), py::arg("power_kw"), py::arg("coupling"))
      .def_readonly("label", &ChargerLevel::label)
      .def_readonly("power_kw", &ChargerLevel::power_kw)
      .def_readonly("coupling", &ChargerLevel::coupling);
  py::class_<ChargeTimeEstimate>(m, "ChargeTimeEstimate")
      .def_readonly("vehicle", &ChargeTimeEstimate::vehicle)
      .def_readonly("charger", &ChargeTimeEstimate::charger)
      .def_readonly("effective_power_kw", &ChargeTimeEstimate::effective_power_kw)
      .def_readonly("duration_minutes", &ChargeTimeEstimate::duration_minutes);

  m.def("effective_power_kw", &effective_power_kw, py::arg("charger"),
        py::arg("vehicle"));
  m.def("full_charge_time", &full_charge_time, py::arg("vehicle"),
        py::arg("charger"));
  m.def("format_duration", &format_duration, py::arg("minutes"),
        py::arg("short_exact_hours") = false);
  m.def("default_charger_levels", &default_charger_levels);

  // report
  py::class_<TableRow>(m, "TableRow")
      .def_readonly("bucket", &TableRow::bucket)
      .def_readonly("towns", &TableRow::towns)
      .def_readonly("towns_pct", &TableRow::towns_pct)
      .def_readonly("population", &TableRow::population)
      .def_readonly("population_pct", &TableRow::population_pct);
  py::class_<AccessibilityTable>(m, "AccessibilityTable")
      .def_readonly("scenario_label", &AccessibilityTable::scenario_label)
      .def_readonly("hub_population_threshold",
                    &AccessibilityTable::hub_population_threshold)
      .def_readonly("vehicle_range_km", &AccessibilityTable::vehicle_range_km)
      .def_readonly("effective_range_km", &AccessibilityTable::effective_range_km)
      .def_readonly("rows", &AccessibilityTable::rows)
      .def_readonly("total", &AccessibilityTable::total);
  m.def("build_table", &build_table, py::arg("histogram"), py::arg("config"));
}
