#pragma once

// Shared test scaffolding: independent distance oracles and deterministic
// random-graph generators. Everything here stays independent of the
// implementation paths it is used to check.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "evreach/road_graph.hpp"

namespace evtest {

// Spherical law of cosines on the same sphere radius: an independent route
// to great-circle distance for checking haversine_km.
inline double law_of_cosines_km(const evreach::LatLon& a,
                                const evreach::LatLon& b) {
  constexpr double rad = 0.017453292519943295;
  const double p1 = a.lat * rad, p2 = b.lat * rad;
  const double dl = (b.lon - a.lon) * rad;
  double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
  c = std::min(1.0, std::max(-1.0, c));
  return evreach::kEarthRadiusKm * std::acos(c);
}

// Builds a RoadGraph directly with prescribed edge weights (straight
// two-point geometries on a synthetic grid). Lets routing tests control
// weights exactly instead of deriving them from coordinates.
inline evreach::RoadGraph make_graph(
    std::size_t n_nodes,
    const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges) {
  std::vector<evreach::GraphNode> nodes;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    nodes.push_back({static_cast<evreach::NodeId>(i),
                     {-20.0 + 0.01 * static_cast<double>(i / 100),
                      130.0 + 0.01 * static_cast<double>(i % 100)}});
  }
  std::vector<evreach::GraphEdge> es;
  for (const auto& [a, b, w] : edges) {
    evreach::GraphEdge e;
    e.id = static_cast<evreach::EdgeId>(es.size());
    e.node_a = a;
    e.node_b = b;
    e.length_km = w;
    e.geometry = {nodes[a].pos, nodes[b].pos};
    e.cum_km = {0.0, w};
    e.source_id = "e" + std::to_string(e.id);
    es.push_back(std::move(e));
  }
  return evreach::RoadGraph(std::move(nodes), std::move(es));
}

struct RandomGraphSpec {
  std::size_t nodes = 25;
  double extra_edge_factor = 1.5;  // edges ~ factor * nodes beyond the tree
  bool integer_weights = false;    // exact arithmetic, forces genuine ties
  double max_weight = 100.0;
};

// Connected random graph: a random spanning tree plus extra random edges.
inline evreach::RoadGraph random_connected_graph(std::mt19937& rng,
                                                 const RandomGraphSpec& spec) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
  std::uniform_real_distribution<double> real_w(1e-6, spec.max_weight);
  std::uniform_int_distribution<int> int_w(1, 20);
  auto weight = [&] {
    return spec.integer_weights ? static_cast<double>(int_w(rng)) : real_w(rng);
  };
  for (std::size_t v = 1; v < spec.nodes; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    edges.emplace_back(static_cast<std::uint32_t>(parent(rng)),
                       static_cast<std::uint32_t>(v), weight());
  }
  const auto extra = static_cast<std::size_t>(
      spec.extra_edge_factor * static_cast<double>(spec.nodes));
  std::uniform_int_distribution<std::size_t> any(0, spec.nodes - 1);
  for (std::size_t i = 0; i < extra; ++i) {
    const auto a = any(rng);
    const auto b = any(rng);
    if (a == b) continue;
    edges.emplace_back(static_cast<std::uint32_t>(a),
                       static_cast<std::uint32_t>(b), weight());
  }
  return make_graph(spec.nodes, edges);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("evreach_test_" + tag + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  const std::filesystem::path& path() const { return dir_; }

  std::filesystem::path write(const std::string& name,
                              const std::string& contents) const {
    const auto p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    out << contents;
    return p;
  }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path dir_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace evtest
