#include "evreach/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "evreach/errors.hpp"
#include "evreach/util.hpp"

namespace evreach {

namespace {

using nlohmann::json;

constexpr const char* kCommunityHeader = "name,latitude,longitude,population";

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

bool parse_int(const std::string& s, std::int64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::int64_t quantize(double deg) {
  return static_cast<std::int64_t>(std::llround(deg * 1e6));
}

}  // namespace

CommunityLoadResult load_communities(const std::filesystem::path& path,
                                     LoadMode mode) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open communities file: " + path.string());

  CommunityLoadResult result;
  std::string line;
  if (!std::getline(in, line)) {
    throw LoadError("empty communities file: " + path.string());
  }
  // Tolerate a UTF-8 BOM on the header line.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  if (strip_cr(line) != kCommunityHeader) {
    throw LoadError(path.string() + ": header must be exactly `" +
                    std::string(kCommunityHeader) + "`, got `" + line + "`");
  }

  auto fail_row = [&](std::size_t lineno, const std::string& msg) {
    if (mode == LoadMode::strict) {
      throw LoadError(path.string() + ":" + std::to_string(lineno) + ": " + msg);
    }
    result.errors.push_back({lineno, msg});
  };

  std::set<std::tuple<std::string, double, double>> seen;
  std::uint32_t next_id = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      fail_row(lineno, "expected 4 fields, got " + std::to_string(fields.size()));
      continue;
    }
    const std::string& name = fields[0];
    if (name.empty()) {
      fail_row(lineno, "missing name");
      continue;
    }
    double lat = 0.0, lon = 0.0;
    if (!parse_double(fields[1], lat)) {
      fail_row(lineno, "non-numeric latitude `" + fields[1] + "`");
      continue;
    }
    if (!parse_double(fields[2], lon)) {
      fail_row(lineno, "non-numeric longitude `" + fields[2] + "`");
      continue;
    }
    if (lat < -90.0 || lat > 90.0) {
      fail_row(lineno, "latitude out of range [-90, 90]: " + fields[1]);
      continue;
    }
    if (lon < -180.0 || lon > 180.0) {
      fail_row(lineno, "longitude out of range [-180, 180]: " + fields[2]);
      continue;
    }
    std::int64_t pop = 0;
    if (!parse_int(fields[3], pop)) {
      fail_row(lineno, "non-numeric population `" + fields[3] + "`");
      continue;
    }
    if (pop < 0) {
      fail_row(lineno, "negative population");
      continue;
    }
    if (!seen.insert({name, lat, lon}).second) {
      result.warnings.push_back(path.string() + ":" + std::to_string(lineno) +
                                ": duplicate row for `" + name +
                                "` collapsed");
      continue;
    }
    result.records.push_back({next_id++, name, lat, lon, pop});
  }
  return result;
}

namespace {

// Appends one part's coordinates as a RoadFeature, dropping consecutive
// vertices that coincide after 1e-6 degree quantization.
void append_part(const json& coords, const std::string& source_id,
                 RoadLoadResult& out) {
  std::vector<LatLon> pts;
  pts.reserve(coords.size());
  for (const auto& c : coords) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() ||
        !c[1].is_number()) {
      throw LoadError("malformed coordinate in feature `" + source_id + "`");
    }
    LatLon p{c[1].get<double>(), c[0].get<double>()};
    if (!valid_coordinate(p)) {
      out.warnings.push_back("feature `" + source_id +
                             "` has out-of-range coordinates; skipped");
      return;
    }
    if (!pts.empty() && quantize(pts.back().lat) == quantize(p.lat) &&
        quantize(pts.back().lon) == quantize(p.lon)) {
      continue;
    }
    pts.push_back(p);
  }
  if (pts.size() < 2) {
    out.warnings.push_back("feature `" + source_id +
                           "` degenerates to fewer than 2 vertices; skipped");
    return;
  }
  out.features.push_back({std::move(pts), source_id});
}

}  // namespace

RoadLoadResult load_roads(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open roads file: " + path.string());

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw LoadError(path.string() + ": invalid GeoJSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw LoadError(path.string() + ": expected a GeoJSON FeatureCollection");
  }

  RoadLoadResult result;
  std::size_t index = 0;
  for (const auto& feature : doc["features"]) {
    const std::string fallback = "feature#" + std::to_string(index++);
    std::string source_id = fallback;
    if (feature.contains("id") && feature["id"].is_string()) {
      source_id = feature["id"].get<std::string>();
    } else if (feature.contains("properties") &&
               feature["properties"].is_object() &&
               feature["properties"].contains("id") &&
               feature["properties"]["id"].is_string()) {
      source_id = feature["properties"]["id"].get<std::string>();
    }
    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
      result.warnings.push_back("feature `" + source_id +
                                "` has no geometry; skipped");
      continue;
    }
    const auto& geom = feature["geometry"];
    const std::string type = geom.value("type", "");
    if (!geom.contains("coordinates") || !geom["coordinates"].is_array()) {
      throw LoadError(path.string() + ": feature `" + source_id +
                      "` lacks coordinates");
    }
    if (type == "LineString") {
      append_part(geom["coordinates"], source_id, result);
    } else if (type == "MultiLineString") {
      std::size_t part = 0;
      for (const auto& coords : geom["coordinates"]) {
        append_part(coords, source_id + "/" + std::to_string(part++), result);
      }
    } else {
      result.warnings.push_back("feature `" + source_id + "` has geometry `" +
                                type + "`, not a line; skipped");
    }
  }
  return result;
}

RegionSplit filter_study_region(const std::vector<CommunityRecord>& communities,
                                const StudyRegion& region) {
  RegionSplit split;
  for (const auto& c : communities) {
    if (c.latitude >= region.min_latitude) {
      split.kept.push_back(c);
    } else {
      split.excluded.push_back(c);
    }
  }
  return split;
}

void write_communities_csv(const std::filesystem::path& path,
                           const std::vector<CommunityRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write communities file: " + path.string());
  out << kCommunityHeader << "\n";
  for (const auto& r : records) {
    out << csv_escape(r.name) << ',' << format_double(r.latitude) << ','
        << format_double(r.longitude) << ',' << r.population << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace evreach
