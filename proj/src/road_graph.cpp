#include "evreach/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace evreach {

namespace {

constexpr double kDegToRad = 0.017453292519943295;
constexpr double kKmPerDegLat = kEarthRadiusKm * kDegToRad;

std::int64_t quantize(double deg) {
  return static_cast<std::int64_t>(std::llround(deg * 1e6));
}

struct QKey {
  std::int64_t lat;
  std::int64_t lon;
  auto operator<=>(const QKey&) const = default;
};

QKey qkey(const LatLon& p) { return {quantize(p.lat), quantize(p.lon)}; }

}  // namespace

RoadGraph::RoadGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  adjacency_offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& e : edges_) {
    ++adjacency_offsets_[e.node_a + 1];
    if (e.node_b != e.node_a) ++adjacency_offsets_[e.node_b + 1];
  }
  for (std::size_t i = 1; i < adjacency_offsets_.size(); ++i) {
    adjacency_offsets_[i] += adjacency_offsets_[i - 1];
  }
  adjacency_.resize(adjacency_offsets_.back());
  std::vector<std::uint32_t> cursor(adjacency_offsets_.begin(),
                                    adjacency_offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[cursor[e.node_a]++] = e.id;
    if (e.node_b != e.node_a) adjacency_[cursor[e.node_b]++] = e.id;
  }
}

std::span<const EdgeId> RoadGraph::incident_edges(NodeId id) const {
  return {adjacency_.data() + adjacency_offsets_[id],
          adjacency_.data() + adjacency_offsets_[id + 1]};
}

GraphBuildResult build_graph(std::span<const RoadFeature> roads,
                             double merge_tolerance_m) {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::vector<std::string> warnings;

  std::map<QKey, NodeId> by_coord;
  // Proximity grid for tolerance merging; cell edge ~ max(tolerance, 1 m).
  const double tol_km = std::max(0.0, merge_tolerance_m) / 1000.0;
  const double cell_deg = std::max(tol_km, 0.001) / kKmPerDegLat;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<NodeId>> grid;

  auto cell_of = [&](const LatLon& p) {
    return std::pair{static_cast<std::int64_t>(std::floor(p.lat / cell_deg)),
                     static_cast<std::int64_t>(std::floor(p.lon / cell_deg))};
  };

  auto resolve_node = [&](const LatLon& p) -> NodeId {
    if (auto it = by_coord.find(qkey(p)); it != by_coord.end()) {
      return it->second;
    }
    if (tol_km > 0.0) {
      // Nearest existing node within tolerance; ties go to the smaller id.
      NodeId best = 0;
      double best_d = tol_km;
      bool found = false;
      const auto [ci, cj] = cell_of(p);
      for (std::int64_t di = -1; di <= 1; ++di) {
        for (std::int64_t dj = -1; dj <= 1; ++dj) {
          auto it = grid.find({ci + di, cj + dj});
          if (it == grid.end()) continue;
          for (NodeId n : it->second) {
            const double d = haversine_km(p, nodes[n].pos);
            if (d < best_d || (d == best_d && found && n < best)) {
              if (d <= tol_km) {
                best = n;
                best_d = d;
                found = true;
              }
            }
          }
        }
      }
      if (found) return best;
    }
    const NodeId id = static_cast<NodeId>(nodes.size());
    nodes.push_back({id, p});
    by_coord.emplace(qkey(p), id);
    grid[cell_of(p)].push_back(id);
    return id;
  };

  for (const auto& feature : roads) {
    if (feature.geometry.size() < 2) continue;  // loader guarantees this
    GraphEdge e;
    e.geometry = feature.geometry;
    e.source_id = feature.source_id;
    e.cum_km.resize(e.geometry.size(), 0.0);
    for (std::size_t i = 1; i < e.geometry.size(); ++i) {
      e.cum_km[i] =
          e.cum_km[i - 1] + haversine_km(e.geometry[i - 1], e.geometry[i]);
    }
    e.length_km = e.cum_km.back();
    if (e.length_km <= 0.0) {
      warnings.push_back("zero-length road feature `" + feature.source_id +
                         "` discarded");
      continue;
    }
    e.node_a = resolve_node(e.geometry.front());
    e.node_b = resolve_node(e.geometry.back());
    e.id = static_cast<EdgeId>(edges.size());
    edges.push_back(std::move(e));
  }

  return {RoadGraph(std::move(nodes), std::move(edges)), std::move(warnings)};
}

namespace {

struct Projection {
  double distance_km;
  double t;  // parameter on the segment, clamped to [0, 1]
};

// Projects `p` onto segment (a, b) in a local equirectangular frame centred
// on `p`. Good to well under a metre at snap-scale distances.
Projection project_onto_segment(const LatLon& p, const LatLon& a,
                                const LatLon& b) {
  const double coslat = std::cos(p.lat * kDegToRad);
  const double ax = (a.lon - p.lon) * coslat * kKmPerDegLat;
  const double ay = (a.lat - p.lat) * kKmPerDegLat;
  const double bx = (b.lon - p.lon) * coslat * kKmPerDegLat;
  const double by = (b.lat - p.lat) * kKmPerDegLat;
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(-(ax * dx + ay * dy) / len2, 0.0, 1.0);
  }
  const LatLon foot = lerp(a, b, t);
  return {haversine_km(p, foot), t};
}

}  // namespace

std::optional<SnapResult> snap_point(const RoadGraph& graph,
                                     std::uint32_t community_id,
                                     const LatLon& point, double max_snap_km) {
  if (graph.empty()) return std::nullopt;

  double best_edge_d = std::numeric_limits<double>::infinity();
  EdgeId best_edge = 0;
  double best_fraction = 0.0;
  LatLon best_edge_point;

  for (const auto& e : graph.edges()) {
    for (std::size_t i = 0; i + 1 < e.geometry.size(); ++i) {
      const auto proj =
          project_onto_segment(point, e.geometry[i], e.geometry[i + 1]);
      const double seg_len = e.cum_km[i + 1] - e.cum_km[i];
      const double frac =
          std::clamp((e.cum_km[i] + proj.t * seg_len) / e.length_km, 0.0, 1.0);
      if (proj.distance_km < best_edge_d ||
          (proj.distance_km == best_edge_d &&
           (e.id < best_edge || (e.id == best_edge && frac < best_fraction)))) {
        best_edge_d = proj.distance_km;
        best_edge = e.id;
        best_fraction = frac;
        best_edge_point = lerp(e.geometry[i], e.geometry[i + 1], proj.t);
      }
    }
  }

  double best_node_d = std::numeric_limits<double>::infinity();
  NodeId best_node = 0;
  for (const auto& n : graph.nodes()) {
    const double d = haversine_km(point, n.pos);
    if (d < best_node_d) {
      best_node_d = d;
      best_node = n.id;
    }
  }

  // Node attachment preferred when essentially tied with the best edge.
  SnapResult result;
  result.community_id = community_id;
  if (best_node_d <= best_edge_d + 1e-9) {
    if (best_node_d > max_snap_km) return std::nullopt;
    result.attachment = Attachment::at_node(best_node);
    result.point = graph.node(best_node).pos;
    result.snap_distance_km = best_node_d;
  } else {
    if (best_edge_d > max_snap_km) return std::nullopt;
    result.attachment = Attachment::on_edge(best_edge, best_fraction);
    result.point = best_edge_point;
    result.snap_distance_km = best_edge_d;
  }
  return result;
}

LatLon attachment_point(const RoadGraph& graph, const Attachment& at) {
  if (at.kind == Attachment::Kind::node) return graph.node(at.node).pos;
  const GraphEdge& e = graph.edge(at.edge);
  const double arc = std::clamp(at.fraction, 0.0, 1.0) * e.length_km;
  auto it = std::upper_bound(e.cum_km.begin(), e.cum_km.end(), arc);
  std::size_t i = it == e.cum_km.begin()
                      ? 0
                      : static_cast<std::size_t>(it - e.cum_km.begin()) - 1;
  i = std::min(i, e.geometry.size() - 2);
  const double seg_len = e.cum_km[i + 1] - e.cum_km[i];
  const double t = seg_len > 0.0 ? (arc - e.cum_km[i]) / seg_len : 0.0;
  return lerp(e.geometry[i], e.geometry[i + 1], std::clamp(t, 0.0, 1.0));
}

std::vector<NodeId> connected_components(const RoadGraph& graph) {
  const std::size_t n = graph.nodes().size();
  std::vector<NodeId> label(n, 0);
  std::vector<bool> visited(n, false);
  std::vector<NodeId> stack;
  for (NodeId seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    stack.push_back(seed);
    visited[seed] = true;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      label[v] = seed;  // seeds ascend, so seed is the component minimum
      for (EdgeId eid : graph.incident_edges(v)) {
        const auto& e = graph.edge(eid);
        const NodeId w = e.node_a == v ? e.node_b : e.node_a;
        if (!visited[w]) {
          visited[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return label;
}

namespace {

struct Seg {
  EdgeId edge;
  LatLon a;
  LatLon b;
  double min_lon;
  double max_lon;
};

int orientation(const LatLon& p, const LatLon& q, const LatLon& r) {
  const double v = (q.lon - p.lon) * (r.lat - p.lat) -
                   (q.lat - p.lat) * (r.lon - p.lon);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment(const LatLon& p, const LatLon& q, const LatLon& r) {
  return std::min(p.lon, r.lon) <= q.lon && q.lon <= std::max(p.lon, r.lon) &&
         std::min(p.lat, r.lat) <= q.lat && q.lat <= std::max(p.lat, r.lat);
}

bool segments_intersect(const LatLon& p1, const LatLon& p2, const LatLon& q1,
                        const LatLon& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, q1, p2)) return true;
  if (o2 == 0 && on_segment(p1, q2, p2)) return true;
  if (o3 == 0 && on_segment(q1, p1, q2)) return true;
  if (o4 == 0 && on_segment(q1, p2, q2)) return true;
  return false;
}

bool near(const LatLon& a, const LatLon& b) {
  return std::abs(a.lat - b.lat) < 2e-6 && std::abs(a.lon - b.lon) < 2e-6;
}

}  // namespace

std::vector<std::string> unnoded_crossing_warnings(const RoadGraph& graph,
                                                   std::size_t max_reports) {
  std::vector<Seg> segs;
  for (const auto& e : graph.edges()) {
    for (std::size_t i = 0; i + 1 < e.geometry.size(); ++i) {
      const auto& a = e.geometry[i];
      const auto& b = e.geometry[i + 1];
      segs.push_back(
          {e.id, a, b, std::min(a.lon, b.lon), std::max(a.lon, b.lon)});
    }
  }
  std::sort(segs.begin(), segs.end(),
            [](const Seg& x, const Seg& y) { return x.min_lon < y.min_lon; });

  std::set<std::pair<EdgeId, EdgeId>> reported;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < segs.size() && warnings.size() < max_reports;
       ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (segs[j].min_lon > segs[i].max_lon) break;
      const Seg& s = segs[i];
      const Seg& t = segs[j];
      if (s.edge == t.edge) continue;
      const auto pair = std::minmax(s.edge, t.edge);
      if (reported.contains({pair.first, pair.second})) continue;
      if (!segments_intersect(s.a, s.b, t.a, t.b)) continue;

      // A touch at a node shared by both edges is proper topology.
      const auto& e1 = graph.edge(s.edge);
      const auto& e2 = graph.edge(t.edge);
      bool shared_node_touch = false;
      for (NodeId n1 : {e1.node_a, e1.node_b}) {
        for (NodeId n2 : {e2.node_a, e2.node_b}) {
          if (n1 != n2) continue;
          const LatLon& np = graph.node(n1).pos;
          // Both segments must meet at the shared node's position.
          if ((near(s.a, np) || near(s.b, np)) &&
              (near(t.a, np) || near(t.b, np))) {
            shared_node_touch = true;
          }
        }
      }
      if (shared_node_touch) continue;

      reported.insert({pair.first, pair.second});
      warnings.push_back("edges `" + e1.source_id + "` and `" + e2.source_id +
                         "` cross without a shared node; they stay "
                         "disconnected for routing");
      if (warnings.size() >= max_reports) break;
    }
  }
  return warnings;
}

}  // namespace evreach
