#pragma once

#include <span>
#include <vector>

namespace evreach {

// IUGG mean earth radius. All distances in this project are great-circle
// kilometres on a sphere of this radius; planning-grade accuracy only.
inline constexpr double kEarthRadiusKm = 6371.0088;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

bool valid_coordinate(const LatLon& p);

// Great-circle distance between two WGS84 points in kilometres.
double haversine_km(const LatLon& a, const LatLon& b);

// Sum of haversine segment lengths over a polyline.
double polyline_length_km(std::span<const LatLon> pts);

// Linear interpolation between two points (plate carree; only meaningful
// for short segments, which is how road vertices are spaced).
LatLon lerp(const LatLon& a, const LatLon& b, double t);

}  // namespace evreach
