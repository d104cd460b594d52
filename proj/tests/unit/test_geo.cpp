#include "evreach/geo.hpp"

#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace evreach;

TEST_CASE("haversine of a point with itself is zero") {
  CHECK(haversine_km({0.0, 0.0}, {0.0, 0.0}) == 0.0);
  CHECK(haversine_km({-23.7, 133.88}, {-23.7, 133.88}) == 0.0);
}

TEST_CASE("haversine matches the law-of-cosines oracle on one degree") {
  // Independent oracle value: 111.19508 km for one degree of arc at the
  // IUGG radius, by the spherical law of cosines.
  CHECK(haversine_km({0.0, 0.0}, {0.0, 1.0}) ==
        doctest::Approx(111.1951).epsilon(1e-3 / 111.1951));
  CHECK(haversine_km({0.0, 0.0}, {1.0, 0.0}) ==
        doctest::Approx(111.1951).epsilon(1e-3 / 111.1951));
}

TEST_CASE("haversine agrees with the law-of-cosines oracle at random points") {
  std::mt19937 rng(20240711);
  std::uniform_real_distribution<double> lat(-60.0, 60.0);
  std::uniform_real_distribution<double> lon(-179.0, 179.0);
  for (int i = 0; i < 100; ++i) {
    const LatLon a{lat(rng), lon(rng)};
    const LatLon b{lat(rng), lon(rng)};
    const double expected = evtest::law_of_cosines_km(a, b);
    // The law of cosines is ill-conditioned near zero separation, hence the
    // absolute slack; points drawn here are far apart.
    CHECK(haversine_km(a, b) == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("haversine is symmetric") {
  std::mt19937 rng(987654);
  std::uniform_real_distribution<double> lat(-90.0, 90.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 100; ++i) {
    const LatLon a{lat(rng), lon(rng)};
    const LatLon b{lat(rng), lon(rng)};
    CHECK(haversine_km(a, b) == haversine_km(b, a));
  }
}

TEST_CASE("polyline length is invariant under vertex reversal") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> jitter(-0.4, 0.4);
  std::vector<LatLon> pts;
  for (int i = 0; i < 12; ++i) {
    pts.push_back({-20.0 + 0.5 * i + jitter(rng), 131.0 + jitter(rng)});
  }
  std::vector<LatLon> reversed(pts.rbegin(), pts.rend());
  CHECK(polyline_length_km(pts) ==
        doctest::Approx(polyline_length_km(reversed)).epsilon(1e-12));
  CHECK(polyline_length_km(std::vector<LatLon>{pts[0]}) == 0.0);
}

TEST_CASE("coordinate validation bounds") {
  CHECK(valid_coordinate({90.0, 180.0}));
  CHECK(valid_coordinate({-90.0, -180.0}));
  CHECK_FALSE(valid_coordinate({90.1, 0.0}));
  CHECK_FALSE(valid_coordinate({0.0, -180.5}));
}
