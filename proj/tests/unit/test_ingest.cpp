#include "evreach/ingest.hpp"

#include "doctest.h"
#include "evreach/errors.hpp"
#include "support.hpp"

using namespace evreach;
using evtest::TempDir;

namespace {
constexpr const char* kHeader = "name,latitude,longitude,population\n";
}

TEST_CASE("load_communities maps fields and assigns sequential ids") {
  TempDir tmp("communities");
  const auto path = tmp.write(
      "c.csv", std::string(kHeader) + "Yuendumu,-22.254,131.799,800\n" +
                   "Papunya,-23.205,131.903,404\n");
  const auto result = load_communities(path);
  REQUIRE(result.records.size() == 2);
  CHECK(result.records[0].id == 0);
  CHECK(result.records[0].name == "Yuendumu");
  CHECK(result.records[0].latitude == -22.254);
  CHECK(result.records[0].longitude == 131.799);
  CHECK(result.records[0].population == 800);
  CHECK(result.records[1].id == 1);
  CHECK(result.errors.empty());
}

TEST_CASE("negative population is a row error with the line number") {
  TempDir tmp("negpop");
  const auto path = tmp.write(
      "c.csv", std::string(kHeader) + "Okville,-20.0,130.0,12\n" +
                   "Badville,-21.0,131.0,-5\n");
  SUBCASE("strict aborts") {
    CHECK_THROWS_AS(load_communities(path, LoadMode::strict), LoadError);
    try {
      load_communities(path, LoadMode::strict);
    } catch (const LoadError& e) {
      const std::string msg = e.what();
      CHECK(msg.find(":3:") != std::string::npos);
      CHECK(msg.find("negative population") != std::string::npos);
    }
  }
  SUBCASE("lenient collects and keeps the valid row") {
    const auto result = load_communities(path, LoadMode::lenient);
    REQUIRE(result.records.size() == 1);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 3);
    CHECK(result.errors[0].message == "negative population");
  }
}

TEST_CASE("3-row file with one bad row keeps 2 records in lenient mode") {
  TempDir tmp("lenient3");
  const auto path = tmp.write(
      "c.csv", std::string(kHeader) + "A,-20.0,130.0,10\n" +
                   "B,not_a_number,130.5,20\n" + "C,-21.0,131.0,30\n");
  const auto result = load_communities(path, LoadMode::lenient);
  CHECK(result.records.size() == 2);
  CHECK(result.errors.size() == 1);
  CHECK(result.records[0].name == "A");
  CHECK(result.records[1].name == "C");
  // Ids stay sequential over emitted records.
  CHECK(result.records[1].id == 1);
}

TEST_CASE("row errors cover blank names and out-of-range coordinates") {
  TempDir tmp("rowerr");
  const auto path = tmp.write(
      "c.csv", std::string(kHeader) + ",-20.0,130.0,10\n" +
                   "B,-95.0,130.0,10\n" + "C,-20.0,190.0,10\n" +
                   "D,-20.0,130.0,3.5\n");
  const auto result = load_communities(path, LoadMode::lenient);
  CHECK(result.records.empty());
  REQUIRE(result.errors.size() == 4);
  CHECK(result.errors[0].message == "missing name");
  CHECK(result.errors[1].message.find("latitude out of range") != std::string::npos);
  CHECK(result.errors[2].message.find("longitude out of range") != std::string::npos);
  CHECK(result.errors[3].message.find("non-numeric population") != std::string::npos);
}

TEST_CASE("header mismatch and missing file are load errors") {
  TempDir tmp("badheader");
  const auto path = tmp.write("c.csv", "name,lat,lon,pop\nA,-20,130,10\n");
  CHECK_THROWS_AS(load_communities(path), LoadError);
  CHECK_THROWS_AS(load_communities(tmp.path() / "nope.csv"), LoadError);
}

TEST_CASE("exact duplicate rows collapse with a warning") {
  TempDir tmp("dup");
  const auto path = tmp.write(
      "c.csv", std::string(kHeader) + "Twin,-20.0,130.0,10\n" +
                   "Twin,-20.0,130.0,10\n" + "Twin,-20.5,130.0,10\n");
  const auto result = load_communities(path);
  CHECK(result.records.size() == 2);  // same name, different spot is kept
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("quoted names with commas survive a round trip") {
  TempDir tmp("quoted");
  const auto path = tmp.write(
      "c.csv",
      std::string(kHeader) + "\"Halls Creek, East\",-18.2265,127.6699,1546\n");
  const auto result = load_communities(path);
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].name == "Halls Creek, East");
}

TEST_CASE("load then re-serialize round-trips all fields bit-exactly") {
  TempDir tmp("roundtrip");
  const auto path = tmp.write(
      "c.csv",
      std::string(kHeader) +
          "Alpha,-22.254001,131.79900001,800\n"
          "Beta,-11.762934582195,130.626201,2250\n"
          "\"Comma, Town\",-20.000000000001,129.99999999999,7\n");
  const auto first = load_communities(path);
  const auto out = tmp.path() / "again.csv";
  write_communities_csv(out, first.records);
  const auto second = load_communities(out);
  REQUIRE(first.records.size() == second.records.size());
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    CHECK(first.records[i].id == second.records[i].id);
    CHECK(first.records[i].name == second.records[i].name);
    CHECK(first.records[i].latitude == second.records[i].latitude);
    CHECK(first.records[i].longitude == second.records[i].longitude);
    CHECK(first.records[i].population == second.records[i].population);
  }
}

namespace {

std::string line_feature(const std::string& coords) {
  return R"({"type":"Feature","properties":{},"geometry":{"type":"LineString","coordinates":)" +
         coords + "}}";
}

std::string collection(const std::string& features) {
  return R"({"type":"FeatureCollection","features":[)" + features + "]}";
}

}  // namespace

TEST_CASE("load_roads reads a LineString with its vertices") {
  TempDir tmp("roads1");
  const auto path = tmp.write(
      "r.geojson",
      collection(line_feature("[[131.0,-22.0],[131.5,-22.2],[132.0,-22.4]]")));
  const auto result = load_roads(path);
  REQUIRE(result.features.size() == 1);
  CHECK(result.features[0].geometry.size() == 3);
  CHECK(result.features[0].geometry[0].lat == -22.0);
  CHECK(result.features[0].geometry[0].lon == 131.0);
  CHECK(result.warnings.empty());
}

TEST_CASE("MultiLineString splits into one feature per part") {
  TempDir tmp("roads2");
  const auto path = tmp.write(
      "r.geojson",
      collection(
          R"({"type":"Feature","properties":{"id":"ml"},"geometry":{"type":"MultiLineString",)"
          R"("coordinates":[[[131.0,-22.0],[131.5,-22.0]],[[132.0,-23.0],[132.5,-23.0]]]}})"));
  const auto result = load_roads(path);
  REQUIRE(result.features.size() == 2);
  CHECK(result.features[0].source_id == "ml/0");
  CHECK(result.features[1].source_id == "ml/1");
}

TEST_CASE("point features are skipped with a warning, lines kept") {
  TempDir tmp("roads3");
  const auto path = tmp.write(
      "r.geojson",
      collection(
          R"({"type":"Feature","properties":{},"geometry":{"type":"Point","coordinates":[131.0,-22.0]}},)" +
          line_feature("[[131.0,-22.0],[131.5,-22.0]]")));
  const auto result = load_roads(path);
  CHECK(result.features.size() == 1);
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("not a line") != std::string::npos);
}

TEST_CASE("malformed roads files are load errors") {
  TempDir tmp("roads4");
  CHECK_THROWS_AS(load_roads(tmp.write("a.geojson", "{ not json")), LoadError);
  CHECK_THROWS_AS(load_roads(tmp.write("b.geojson", R"({"type":"Feature"})")),
                  LoadError);
  CHECK_THROWS_AS(load_roads(tmp.path() / "missing.geojson"), LoadError);
}

TEST_CASE("degenerate features never yield fewer than 2 vertices") {
  TempDir tmp("roads5");
  // Second feature collapses to a single point after quantization.
  const auto path = tmp.write(
      "r.geojson",
      collection(line_feature("[[131.0,-22.0],[131.0000001,-22.0000001]]") +
                 "," + line_feature("[[131.0,-22.0],[131.5,-22.0]]")));
  const auto result = load_roads(path);
  REQUIRE(result.features.size() == 1);
  for (const auto& f : result.features) CHECK(f.geometry.size() >= 2);
  CHECK(result.warnings.size() == 1);
}

TEST_CASE("filter_study_region keeps the boundary and everything north") {
  std::vector<CommunityRecord> communities = {
      {0, "Brisbaneish", -27.0, 153.0, 100000},
      {1, "OnTheLine", -28.0, 140.0, 50},
      {2, "South", -29.1, 135.0, 200},
  };
  const auto split = filter_study_region(communities, {-28.0});
  REQUIRE(split.kept.size() == 2);
  CHECK(split.kept[0].name == "Brisbaneish");
  CHECK(split.kept[1].name == "OnTheLine");
  REQUIRE(split.excluded.size() == 1);
  CHECK(split.excluded[0].name == "South");
}

TEST_CASE("filter_study_region partitions its input") {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> lat(-45.0, -10.0);
  std::vector<CommunityRecord> communities;
  for (std::uint32_t i = 0; i < 200; ++i) {
    communities.push_back({i, "c" + std::to_string(i), lat(rng), 133.0, i});
  }
  const auto split = filter_study_region(communities, {-28.0});
  CHECK(split.kept.size() + split.excluded.size() == communities.size());
  std::size_t ki = 0, xi = 0;
  for (const auto& c : communities) {
    if (c.latitude >= -28.0) {
      CHECK(split.kept[ki++].id == c.id);
    } else {
      CHECK(split.excluded[xi++].id == c.id);
    }
  }
}
