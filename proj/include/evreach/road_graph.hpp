#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evreach/geo.hpp"
#include "evreach/ingest.hpp"

namespace evreach {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct GraphNode {
  NodeId id = 0;
  LatLon pos;
};

struct GraphEdge {
  EdgeId id = 0;
  NodeId node_a = 0;
  NodeId node_b = 0;
  double length_km = 0.0;
  std::vector<LatLon> geometry;  // original polyline, node_a end first
  std::vector<double> cum_km;    // arc length at each vertex; back() == length_km
  std::string source_id;
};

// Undirected routable graph. Immutable once built; safe to share across
// threads. Edges keep their source polylines so snapping and service-area
// geometry work on real road shapes, not straight lines.
class RoadGraph {
 public:
  RoadGraph() = default;
  RoadGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphNode& node(NodeId id) const { return nodes_[id]; }
  const GraphEdge& edge(EdgeId id) const { return edges_[id]; }
  std::span<const EdgeId> incident_edges(NodeId id) const;
  bool empty() const { return nodes_.empty(); }

 private:
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::uint32_t> adjacency_offsets_;
  std::vector<EdgeId> adjacency_;
};

struct GraphBuildResult {
  RoadGraph graph;
  std::vector<std::string> warnings;
};

// Builds the graph from road polylines. Feature endpoints whose coordinates
// coincide after 1e-6 degree quantization, or that lie within
// merge_tolerance_m of an existing node, become one node. Each feature
// becomes one edge; zero-length features are discarded with a warning.
// Edges are never split at interior intersections: the input is assumed
// noded, and unnoded_crossing_warnings() reports violations.
GraphBuildResult build_graph(std::span<const RoadFeature> roads,
                             double merge_tolerance_m = 1.0);

// Where a point attaches to the graph: either a node, or a position along
// an edge given as the arc-length fraction in [0, 1] from node_a.
struct Attachment {
  enum class Kind { node, edge };
  Kind kind = Kind::node;
  NodeId node = 0;
  EdgeId edge = 0;
  double fraction = 0.0;

  static Attachment at_node(NodeId n) { return {Kind::node, n, 0, 0.0}; }
  static Attachment on_edge(EdgeId e, double fraction) {
    return {Kind::edge, 0, e, fraction};
  }
  friend bool operator==(const Attachment&, const Attachment&) = default;
};

struct SnapResult {
  std::uint32_t community_id = 0;
  Attachment attachment;
  LatLon point;  // coordinates of the attachment point
  double snap_distance_km = 0.0;
};

// Finds the globally nearest point on any edge geometry (or node). Node
// attachment wins when within 1e-9 km of the best edge distance. Returns
// nothing when the nearest attachment is farther than max_snap_km.
std::optional<SnapResult> snap_point(const RoadGraph& graph,
                                     std::uint32_t community_id,
                                     const LatLon& point,
                                     double max_snap_km = 5.0);

// Coordinates of an attachment (edge attachments interpolate the polyline).
LatLon attachment_point(const RoadGraph& graph, const Attachment& at);

// Per-node component label; the label is the smallest node id contained in
// the component, so labeling is deterministic.
std::vector<NodeId> connected_components(const RoadGraph& graph);

// Data-quality check: reports edge pairs whose geometries cross or touch at
// a point that is not a node shared by both edges. Such crossings stay
// disconnected for routing. At most max_reports entries.
std::vector<std::string> unnoded_crossing_warnings(const RoadGraph& graph,
                                                   std::size_t max_reports = 100);

}  // namespace evreach
