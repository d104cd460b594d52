#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "evreach/road_graph.hpp"

namespace evreach {

// A shortest-path source: an external id (community id for hub queries)
// plus where it attaches to the graph. Ids must be unique within one query.
struct SourcePoint {
  std::uint64_t id = 0;
  Attachment attachment;
};

struct AttachmentLabel {
  bool reachable = false;
  double distance_km = 0.0;
  std::uint64_t source_id = 0;
};

// Result of a (multi-)source shortest-path pass: per graph node, the
// distance to the nearest source and which source it was. Distance ties
// between sources always resolve to the smallest source id, independent of
// heap order, so results are deterministic. Attachments anywhere on the
// graph (including mid-edge virtual points) are evaluated with at().
class DistanceLabeling {
 public:
  DistanceLabeling(const RoadGraph& graph, std::vector<SourcePoint> sources);

  bool node_reachable(NodeId v) const { return src_index_[v] >= 0; }
  double node_distance_km(NodeId v) const { return dist_[v]; }
  std::uint64_t node_source_id(NodeId v) const {
    return sources_[static_cast<std::size_t>(src_index_[v])].id;
  }

  // Distance/source at an arbitrary attachment. Mid-edge points take the
  // best of: entering via either endpoint, or running along the edge
  // directly from a source attached to the same edge.
  AttachmentLabel at(const RoadGraph& graph, const Attachment& at) const;

  const std::vector<SourcePoint>& sources() const { return sources_; }

 private:
  friend DistanceLabeling multi_source_labeling(const RoadGraph&,
                                                std::span<const SourcePoint>);
  std::vector<double> dist_;
  std::vector<std::int32_t> src_index_;  // -1 marks unreachable
  std::vector<SourcePoint> sources_;
  std::unordered_map<EdgeId, std::vector<std::size_t>> sources_on_edge_;
};

// Exact label-setting shortest paths from one source attachment.
DistanceLabeling shortest_paths_from(const RoadGraph& graph,
                                     const Attachment& source);

// One-pass nearest-source labeling over all sources. Equivalent to taking
// the per-node minimum over single-source runs (a tested property), at the
// cost of a single pass.
DistanceLabeling multi_source_labeling(const RoadGraph& graph,
                                       std::span<const SourcePoint> sources);

// Dense origin x destination shortest-distance table. Unreachable pairs
// carry an explicit marker (never an infinity masquerading as a distance).
class ODMatrix {
 public:
  ODMatrix(std::vector<std::uint64_t> origin_ids,
           std::vector<std::uint64_t> destination_ids)
      : origin_ids_(std::move(origin_ids)),
        destination_ids_(std::move(destination_ids)),
        data_(origin_ids_.size() * destination_ids_.size(),
              std::numeric_limits<double>::quiet_NaN()) {}

  const std::vector<std::uint64_t>& origin_ids() const { return origin_ids_; }
  const std::vector<std::uint64_t>& destination_ids() const {
    return destination_ids_;
  }
  bool reachable(std::size_t o, std::size_t d) const {
    return !std::isnan(data_[o * destination_ids_.size() + d]);
  }
  double distance_km(std::size_t o, std::size_t d) const {
    return data_[o * destination_ids_.size() + d];
  }
  void set(std::size_t o, std::size_t d, double km) {
    data_[o * destination_ids_.size() + d] = km;
  }

 private:
  std::vector<std::uint64_t> origin_ids_;
  std::vector<std::uint64_t> destination_ids_;
  std::vector<double> data_;
};

// Pairwise distances, one single-source pass per origin row. Rows are
// independent and fan out across `workers` threads (0 = all processors);
// results do not depend on the thread count.
ODMatrix od_matrix(const RoadGraph& graph, std::span<const SourcePoint> origins,
                   std::span<const SourcePoint> destinations, int workers = 1);

// Closed sub-segment of an edge, as fractions of its arc length.
struct EdgeInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct EdgeCoverage {
  EdgeId edge = 0;
  std::vector<EdgeInterval> intervals;  // sorted, disjoint
};

// Sub-edges whose every point lies within threshold_km of some source.
struct ServiceArea {
  double threshold_km = 0.0;
  std::vector<EdgeCoverage> covered;  // sorted by edge id
};

// Service areas for strictly ascending positive thresholds; coverage is
// nested across thresholds. Edge interval work fans out over `workers`.
std::vector<ServiceArea> service_area(const RoadGraph& graph,
                                      std::span<const SourcePoint> sources,
                                      std::span<const double> thresholds,
                                      int workers = 1);

// Test oracle: cubic all-pairs shortest distances over graph nodes.
// Row-major n x n with +infinity where unreachable. Refuses graphs larger
// than node_cap.
std::vector<double> all_pairs_oracle(const RoadGraph& graph,
                                     std::size_t node_cap = 500);

}  // namespace evreach
