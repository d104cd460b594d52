#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evreach/geo.hpp"

namespace evreach {

// A named, geolocated settlement with an estimated resident population.
// Ids are assigned sequentially at load and stay stable for the whole run.
struct CommunityRecord {
  std::uint32_t id = 0;
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
  std::int64_t population = 0;

  LatLon position() const { return {latitude, longitude}; }
};

// One polyline from the roads file. Multi-part inputs are split so each
// feature here is a single line string with at least two distinct vertices.
struct RoadFeature {
  std::vector<LatLon> geometry;
  std::string source_id;
};

// Communities strictly south of min_latitude are excluded from the study.
struct StudyRegion {
  double min_latitude = -90.0;
};

enum class LoadMode { strict, lenient };

struct RowError {
  std::size_t line = 0;  // 1-based line number in the source file
  std::string message;
};

struct CommunityLoadResult {
  std::vector<CommunityRecord> records;
  std::vector<RowError> errors;       // only populated in lenient mode
  std::vector<std::string> warnings;  // duplicate rows collapsed, ...
};

// Reads a communities CSV with header `name,latitude,longitude,population`.
// strict: the first row error aborts with LoadError. lenient: bad rows are
// collected in `errors` and valid rows kept. Exact duplicate rows
// (name, latitude, longitude) are collapsed with a warning.
CommunityLoadResult load_communities(const std::filesystem::path& path,
                                     LoadMode mode = LoadMode::strict);

struct RoadLoadResult {
  std::vector<RoadFeature> features;
  std::vector<std::string> warnings;
};

// Reads a GeoJSON FeatureCollection of LineString / MultiLineString
// features (WGS84). MultiLineStrings are split one part per RoadFeature;
// non-line geometries are skipped with a warning. Consecutive vertices that
// coincide after 1e-6 degree quantization are dropped; features left with
// fewer than two vertices are skipped with a warning.
RoadLoadResult load_roads(const std::filesystem::path& path);

struct RegionSplit {
  std::vector<CommunityRecord> kept;
  std::vector<CommunityRecord> excluded;
};

// Partitions communities by the study-region latitude filter. Records with
// latitude >= min_latitude are kept; both halves preserve input order.
RegionSplit filter_study_region(const std::vector<CommunityRecord>& communities,
                                const StudyRegion& region);

// Serializes records back to the documented CSV schema. Coordinates are
// written with shortest round-trip formatting so load(write(load(x)))
// reproduces every field bit-exactly.
void write_communities_csv(const std::filesystem::path& path,
                           const std::vector<CommunityRecord>& records);

}  // namespace evreach
