#include "evreach/routing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "evreach/errors.hpp"
#include "evreach/util.hpp"

namespace evreach {

namespace {

// All costs below share these expressions so that single-source, multi-
// source and OD evaluations follow the same arithmetic path bit for bit.
double enter_cost_a(const GraphEdge& e, double fraction) {
  return fraction * e.length_km;
}
double enter_cost_b(const GraphEdge& e, double fraction) {
  return (1.0 - fraction) * e.length_km;
}
double along_edge_cost(const GraphEdge& e, double f_from, double f_to) {
  return std::abs(f_from - f_to) * e.length_km;
}

struct HeapEntry {
  double dist;
  std::uint64_t source_id;
  NodeId node;

  bool operator>(const HeapEntry& o) const {
    if (dist != o.dist) return dist > o.dist;
    if (source_id != o.source_id) return source_id > o.source_id;
    return node > o.node;
  }
};

}  // namespace

DistanceLabeling::DistanceLabeling(const RoadGraph& graph,
                                   std::vector<SourcePoint> sources)
    : dist_(graph.nodes().size(), std::numeric_limits<double>::infinity()),
      src_index_(graph.nodes().size(), -1),
      sources_(std::move(sources)) {
  if (sources_.empty()) {
    throw ConfigError("shortest-path query requires at least one source");
  }
  std::set<std::uint64_t> ids;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (!ids.insert(sources_[i].id).second) {
      throw ConfigError("duplicate source id in shortest-path query: " +
                        std::to_string(sources_[i].id));
    }
    if (sources_[i].attachment.kind == Attachment::Kind::edge) {
      sources_on_edge_[sources_[i].attachment.edge].push_back(i);
    }
  }

  // Label-setting Dijkstra over (distance, source id): ties between sources
  // settle on the smallest id regardless of insertion order.
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
  std::unordered_map<std::uint64_t, std::int32_t> index_of_id;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    index_of_id[sources_[i].id] = static_cast<std::int32_t>(i);
  }
  auto improve = [&](NodeId v, double d, std::uint64_t sid) {
    const std::int32_t cur = src_index_[v];
    if (cur < 0 || d < dist_[v] ||
        (d == dist_[v] && sid < sources_[static_cast<std::size_t>(cur)].id)) {
      dist_[v] = d;
      src_index_[v] = index_of_id[sid];
      heap.push({d, sid, v});
    }
  };

  for (const auto& s : sources_) {
    if (s.attachment.kind == Attachment::Kind::node) {
      improve(s.attachment.node, 0.0, s.id);
    } else {
      const GraphEdge& e = graph.edge(s.attachment.edge);
      improve(e.node_a, enter_cost_a(e, s.attachment.fraction), s.id);
      improve(e.node_b, enter_cost_b(e, s.attachment.fraction), s.id);
    }
  }

  while (!heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    const NodeId u = top.node;
    if (top.dist != dist_[u] ||
        sources_[static_cast<std::size_t>(src_index_[u])].id != top.source_id) {
      continue;  // stale entry
    }
    for (EdgeId eid : graph.incident_edges(u)) {
      const GraphEdge& e = graph.edge(eid);
      const NodeId v = e.node_a == u ? e.node_b : e.node_a;
      if (v == u) continue;
      improve(v, top.dist + e.length_km, top.source_id);
    }
  }
}

AttachmentLabel DistanceLabeling::at(const RoadGraph& graph,
                                     const Attachment& at) const {
  if (at.kind == Attachment::Kind::node) {
    if (!node_reachable(at.node)) return {};
    return {true, dist_[at.node], node_source_id(at.node)};
  }

  const GraphEdge& e = graph.edge(at.edge);
  bool found = false;
  double best = 0.0;
  std::uint64_t best_id = 0;
  auto offer = [&](double d, std::uint64_t sid) {
    if (!found || d < best || (d == best && sid < best_id)) {
      found = true;
      best = d;
      best_id = sid;
    }
  };
  if (node_reachable(e.node_a)) {
    offer(dist_[e.node_a] + enter_cost_a(e, at.fraction),
          node_source_id(e.node_a));
  }
  if (node_reachable(e.node_b)) {
    offer(dist_[e.node_b] + enter_cost_b(e, at.fraction),
          node_source_id(e.node_b));
  }
  if (auto it = sources_on_edge_.find(at.edge); it != sources_on_edge_.end()) {
    for (std::size_t i : it->second) {
      offer(along_edge_cost(e, sources_[i].attachment.fraction, at.fraction),
            sources_[i].id);
    }
  }
  if (!found) return {};
  return {true, best, best_id};
}

DistanceLabeling shortest_paths_from(const RoadGraph& graph,
                                     const Attachment& source) {
  return DistanceLabeling(graph, {SourcePoint{0, source}});
}

DistanceLabeling multi_source_labeling(const RoadGraph& graph,
                                       std::span<const SourcePoint> sources) {
  return DistanceLabeling(graph,
                          std::vector<SourcePoint>(sources.begin(), sources.end()));
}

ODMatrix od_matrix(const RoadGraph& graph, std::span<const SourcePoint> origins,
                   std::span<const SourcePoint> destinations, int workers) {
  if (origins.empty() || destinations.empty()) {
    throw ConfigError("od_matrix requires non-empty origin and destination lists");
  }
  std::vector<std::uint64_t> oids, dids;
  for (const auto& o : origins) oids.push_back(o.id);
  for (const auto& d : destinations) dids.push_back(d.id);
  ODMatrix matrix(std::move(oids), std::move(dids));

  parallel_for(origins.size(), workers, [&](std::size_t row) {
    const DistanceLabeling labeling(graph, {origins[row]});
    for (std::size_t col = 0; col < destinations.size(); ++col) {
      const auto label = labeling.at(graph, destinations[col].attachment);
      if (label.reachable) matrix.set(row, col, label.distance_km);
    }
  });
  return matrix;
}

namespace {

void merge_intervals(std::vector<EdgeInterval>& intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const EdgeInterval& a, const EdgeInterval& b) {
              return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
            });
  std::vector<EdgeInterval> merged;
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  intervals = std::move(merged);
}

}  // namespace

std::vector<ServiceArea> service_area(const RoadGraph& graph,
                                      std::span<const SourcePoint> sources,
                                      std::span<const double> thresholds,
                                      int workers) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] <= 0.0 || (i > 0 && thresholds[i] <= thresholds[i - 1])) {
      throw ConfigError("service-area thresholds must be strictly ascending and positive");
    }
  }
  const DistanceLabeling labeling = multi_source_labeling(graph, sources);

  std::vector<ServiceArea> areas(thresholds.size());
  const std::size_t n_edges = graph.edges().size();
  // Per-edge interval sets, computed independently then compacted in id
  // order so the result is identical for any worker count.
  std::vector<std::vector<std::vector<EdgeInterval>>> per_edge(
      thresholds.size(),
      std::vector<std::vector<EdgeInterval>>(n_edges));

  parallel_for(n_edges, workers, [&](std::size_t ei) {
    const GraphEdge& e = graph.edges()[ei];
    const double w = e.length_km;
    for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
      const double threshold = thresholds[ti];
      auto& intervals = per_edge[ti][ei];
      if (labeling.node_reachable(e.node_a) &&
          labeling.node_distance_km(e.node_a) <= threshold) {
        const double reach =
            (threshold - labeling.node_distance_km(e.node_a)) / w;
        intervals.push_back({0.0, std::min(1.0, reach)});
      }
      if (labeling.node_reachable(e.node_b) &&
          labeling.node_distance_km(e.node_b) <= threshold) {
        const double reach =
            (threshold - labeling.node_distance_km(e.node_b)) / w;
        intervals.push_back({std::max(0.0, 1.0 - reach), 1.0});
      }
      for (const auto& s : labeling.sources()) {
        if (s.attachment.kind == Attachment::Kind::edge &&
            s.attachment.edge == e.id) {
          const double reach = threshold / w;
          intervals.push_back(
              {std::max(0.0, s.attachment.fraction - reach),
               std::min(1.0, s.attachment.fraction + reach)});
        }
      }
      merge_intervals(intervals);
    }
  });

  for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
    areas[ti].threshold_km = thresholds[ti];
    for (std::size_t ei = 0; ei < n_edges; ++ei) {
      if (!per_edge[ti][ei].empty()) {
        areas[ti].covered.push_back(
            {static_cast<EdgeId>(ei), std::move(per_edge[ti][ei])});
      }
    }
  }
  return areas;
}

std::vector<double> all_pairs_oracle(const RoadGraph& graph,
                                     std::size_t node_cap) {
  const std::size_t n = graph.nodes().size();
  if (n > node_cap) {
    throw OracleCapError("all_pairs_oracle refused: " + std::to_string(n) +
                         " nodes exceeds cap " + std::to_string(node_cap));
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0.0;
  for (const auto& e : graph.edges()) {
    if (e.node_a == e.node_b) continue;
    double& ab = dist[e.node_a * n + e.node_b];
    double& ba = dist[e.node_b * n + e.node_a];
    ab = std::min(ab, e.length_km);
    ba = std::min(ba, e.length_km);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = dist[i * n + k];
      if (dik == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double cand = dik + dist[k * n + j];
        if (cand < dist[i * n + j]) dist[i * n + j] = cand;
      }
    }
  }
  return dist;
}

}  // namespace evreach
