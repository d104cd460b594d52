#include "evreach/config.hpp"

#include "doctest.h"
#include "evreach/errors.hpp"
#include "support.hpp"

using namespace evreach;
using evtest::TempDir;

namespace {

constexpr const char* kMinimalConfig = R"(# minimal run config
[paths]
communities = "c.csv"
roads = "r.geojson"

[[vehicle]]
name = "short"
range_km = 336.0
battery_kwh = 71.0
onboard_ac_cap_kw = 11.0

[[scenario]]
label = "only"
hub_population_threshold = 1000
vehicle = "short"
)";

}  // namespace

TEST_CASE("toml subset: sections, arrays of tables, scalars and comments") {
  const auto doc = parse_toml(R"(
# leading comment
[alpha]
text = "hi # not a comment"
count = 42        # trailing comment
ratio = 0.5
flag = true
list = [1, 2, 3]
names = ["a", "b"]

[[item]]
k = 1
[[item]]
k = 2
)");
  const auto& alpha = doc.tables.at("alpha");
  CHECK(alpha.values.at("text").str == "hi # not a comment");
  CHECK(alpha.values.at("count").integer == 42);
  CHECK(alpha.values.at("ratio").real == 0.5);
  CHECK(alpha.values.at("flag").boolean == true);
  REQUIRE(alpha.values.at("list").array.size() == 3);
  CHECK(alpha.values.at("list").array[1].integer == 2);
  CHECK(alpha.values.at("names").array[0].str == "a");
  REQUIRE(doc.table_arrays.at("item").size() == 2);
  CHECK(doc.table_arrays.at("item")[1].values.at("k").integer == 2);
}

TEST_CASE("toml subset: string escapes") {
  const auto doc = parse_toml("[s]\nv = \"a\\\"b\\\\c\\td\"\n");
  CHECK(doc.tables.at("s").values.at("v").str == "a\"b\\c\td");
}

TEST_CASE("toml subset: malformed lines carry line numbers") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_toml(text);
      FAIL_CHECK("expected ConfigError for: " << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("[a]\nnot a kv\n", "line 2");
  expect_error("[a]\nx = \n", "missing value");
  expect_error("[a]\nx = 1\nx = 2\n", "duplicate key");
  expect_error("[a]\n[a]\n", "duplicate section");
  expect_error("[bad name]\nx = 1\n", "invalid section");
  expect_error("[a]\nx = [1,,2]\n", "empty array element");
  expect_error("[a]\nx = \"unterminated\n", "unterminated string");
  // Trailing commas are fine, as in full TOML.
  CHECK(parse_toml("[a]\nx = [1, 2, ]\n").tables.at("a").values.at("x").array.size() == 2);
}

TEST_CASE("run config applies defaults and resolves relative paths") {
  TempDir tmp("cfg");
  const auto path = tmp.write("run.toml", kMinimalConfig);
  const auto config = load_run_config(path);
  CHECK(config.communities_path == tmp.path() / "c.csv");
  CHECK(config.roads_path == tmp.path() / "r.geojson");
  CHECK(config.output_dir == tmp.path() / "out");
  CHECK(config.region.min_latitude == -28.0);
  CHECK(config.merge_tolerance_m == 1.0);
  CHECK(config.max_snap_km == 5.0);
  CHECK(config.workers == 0);
  CHECK(config.oracle_cap == 500);
  CHECK(config.load_mode == LoadMode::strict);
  REQUIRE(config.scenarios.size() == 1);
  CHECK(config.scenarios[0].vehicle.name == "short");
  CHECK(config.scenarios[0].derate_factor == 1.0);
  CHECK(config.scenarios[0].max_stop_bucket == 3);
  // Charger levels fall back to the documented defaults.
  REQUIRE(config.chargers.size() == 4);
  CHECK(config.chargers[0].label == "L1");
}

TEST_CASE("run config validation failures") {
  TempDir tmp("cfgbad");
  auto expect_config_error = [&](const std::string& name, std::string body,
                                 const std::string& needle) {
    const auto p = tmp.write(name, body);
    try {
      load_run_config(p);
      FAIL_CHECK("expected ConfigError (" << needle << ")");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_config_error("a.toml", "[paths]\nroads = \"r\"\n",
                      "missing required key `communities`");
  expect_config_error("b.toml",
                      "[paths]\ncommunities = \"c\"\nroads = \"r\"\n",
                      "at least one [[scenario]]");
  expect_config_error("c.toml",
                      std::string(kMinimalConfig) + "[typo_section]\nx = 1\n",
                      "unknown config section");
  expect_config_error("d.toml",
                      std::string(kMinimalConfig) +
                          "[[scenario]]\nlabel = \"x\"\n"
                          "hub_population_threshold = 1000\nvehicle = \"nope\"\n",
                      "vehicle `nope`");
  expect_config_error("e.toml",
                      std::string(kMinimalConfig) +
                          "[[scenario]]\nlabel = \"only\"\n"
                          "hub_population_threshold = 1000\nvehicle = \"short\"\n",
                      "duplicate scenario label");
  expect_config_error(
      "f.toml",
      std::string(kMinimalConfig) + "[tolerances]\nmax_snap_km = -2.0\n",
      "max_snap_km");
  expect_config_error("g.toml",
                      std::string(kMinimalConfig) +
                          "[[charger]]\nlabel = \"L3-fast\"\n"
                          "power_kw = 75.0\ncoupling = \"AC\"\n",
                      "level 3 charging is DC");
  expect_config_error("h.toml",
                      "[paths]\ncommunities = \"c\"\nroads = \"r\"\n"
                      "unknown_key = 1\n"
                      "[[vehicle]]\nname = \"short\"\nrange_km = 336.0\n"
                      "battery_kwh = 71.0\nonboard_ac_cap_kw = 11.0\n"
                      "[[scenario]]\nlabel = \"only\"\n"
                      "hub_population_threshold = 1000\nvehicle = \"short\"\n",
                      "unknown key");
}

TEST_CASE("scenario fields parse with explicit values") {
  TempDir tmp("cfgfull");
  const auto path = tmp.write("run.toml", R"(
[paths]
communities = "/abs/c.csv"
roads = "/abs/r.geojson"
output_dir = "/abs/out"

[study_region]
min_latitude = -26.5

[tolerances]
merge_tolerance_m = 2.5
max_snap_km = 10.0

[engine]
workers = 4
oracle_cap = 100
load_mode = "lenient"

[[vehicle]]
name = "long"
range_km = 660.0
battery_kwh = 100.0
onboard_ac_cap_kw = 11.0

[[charger]]
label = "L2"
power_kw = 22.0
coupling = "AC"

[[scenario]]
label = "derated"
hub_population_threshold = 5000
vehicle = "long"
derate_factor = 0.5
max_stop_bucket = 5
)");
  const auto config = load_run_config(path);
  CHECK(config.communities_path == "/abs/c.csv");  // absolute stays put
  CHECK(config.region.min_latitude == -26.5);
  CHECK(config.merge_tolerance_m == 2.5);
  CHECK(config.workers == 4);
  CHECK(config.load_mode == LoadMode::lenient);
  REQUIRE(config.chargers.size() == 1);
  CHECK(config.chargers[0].power_kw == 22.0);
  CHECK(config.scenarios[0].derate_factor == 0.5);
  CHECK(config.scenarios[0].max_stop_bucket == 5);
  CHECK(config.scenarios[0].vehicle.range_km == 660.0);
}

TEST_CASE("unreadable config files are ConfigError") {
  CHECK_THROWS_AS(load_run_config("/definitely/not/here.toml"), ConfigError);
}
