#include "generators.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

namespace ctgcn::testsupport {

namespace {

std::vector<Edge> er_edges(Index n, double p, Rng& rng, double w_lo = 1.0, double w_hi = 1.0) {
  std::vector<Edge> edges;
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      if (rng.next_real() < p) {
        const Real w = w_lo == w_hi ? w_lo : rng.next_uniform(w_lo, w_hi);
        edges.push_back({u, v, w});
      }
    }
  }
  return edges;
}

using EdgeKey = std::pair<Index, Index>;

std::set<EdgeKey> block_model_edges(Index n, double p_intra, double p_inter, Rng& rng) {
  const Index half = n / 2;
  std::set<EdgeKey> edges;
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      const bool same = (u < half) == (v < half);
      if (rng.next_real() < (same ? p_intra : p_inter)) edges.emplace(u, v);
    }
  }
  return edges;
}

SnapshotGraph from_edge_keys(Index n, const std::set<EdgeKey>& keys, int t) {
  std::vector<Edge> edges;
  edges.reserve(keys.size());
  for (const auto& [u, v] : keys) edges.push_back({u, v, 1.0});
  return make_snapshot(n, edges, t);
}

// Replace `churn` of the current edges with fresh draws that respect the
// block probabilities (inter-block candidates accepted at the reduced rate).
void churn_edges(std::set<EdgeKey>& edges, Index n, double p_intra, double p_inter,
                 double churn, Rng& rng) {
  const Index half = n / 2;
  std::vector<EdgeKey> current(edges.begin(), edges.end());
  const std::size_t replace = static_cast<std::size_t>(churn * static_cast<double>(current.size()));
  rng.shuffle(current);
  for (std::size_t i = 0; i < replace && i < current.size(); ++i) edges.erase(current[i]);
  std::size_t added = 0;
  std::size_t guard = 0;
  while (added < replace && guard < 100000) {
    ++guard;
    Index u = static_cast<Index>(rng.next_index(static_cast<std::size_t>(n)));
    Index v = static_cast<Index>(rng.next_index(static_cast<std::size_t>(n)));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    const bool same = (u < half) == (v < half);
    const double accept = same ? 1.0 : p_inter / p_intra;
    if (rng.next_real() >= accept) continue;
    if (edges.emplace(u, v).second) ++added;
  }
}

}  // namespace

SnapshotGraph random_graph(Index n, double p, std::uint64_t seed) {
  Rng rng(seed);
  return make_snapshot(n, er_edges(n, p, rng));
}

SnapshotGraph random_weighted_graph(Index n, double p, std::uint64_t seed) {
  Rng rng(seed);
  return make_snapshot(n, er_edges(n, p, rng, 0.5, 2.0));
}

SnapshotGraph triangle() {
  return make_snapshot(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

SnapshotGraph path_graph(Index n) {
  std::vector<Edge> edges;
  for (Index v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  return make_snapshot(n, edges);
}

SnapshotGraph star_graph(Index leaves) {
  std::vector<Edge> edges;
  for (Index v = 1; v <= leaves; ++v) edges.push_back({0, v, 1.0});
  return make_snapshot(leaves + 1, edges);
}

SnapshotGraph complete_graph(Index n) {
  std::vector<Edge> edges;
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  }
  return make_snapshot(n, edges);
}

SnapshotGraph triangle_with_pendant() {
  return make_snapshot(4, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
}

DynamicGraph two_community_sequence(Index n, int snapshots, double p_intra, double p_inter,
                                    double churn, std::uint64_t seed) {
  Rng rng(seed);
  DynamicGraph dyn;
  for (Index v = 0; v < n; ++v) dyn.node_labels.push_back(v);
  std::set<EdgeKey> edges = block_model_edges(n, p_intra, p_inter, rng);
  dyn.snapshots.push_back(from_edge_keys(n, edges, 0));
  for (int t = 1; t < snapshots; ++t) {
    churn_edges(edges, n, p_intra, p_inter, churn, rng);
    dyn.snapshots.push_back(from_edge_keys(n, edges, t));
  }
  return dyn;
}

DynamicGraph mirrored_sequence(Index base_n, int snapshots, double p, double churn,
                               std::uint64_t seed) {
  Rng rng(seed);
  DynamicGraph dyn;
  for (Index v = 0; v < 2 * base_n; ++v) dyn.node_labels.push_back(v);
  std::set<EdgeKey> base;
  for (const Edge& e : er_edges(base_n, p, rng)) base.emplace(e.u, e.v);
  for (int t = 0; t < snapshots; ++t) {
    if (t > 0) churn_edges(base, base_n, p, p, churn, rng);
    std::vector<Edge> edges;
    for (const auto& [u, v] : base) {
      edges.push_back({u, v, 1.0});
      edges.push_back({u + base_n, v + base_n, 1.0});
    }
    dyn.snapshots.push_back(make_snapshot(2 * base_n, edges, t));
  }
  return dyn;
}

DynamicGraph fixed_degree_sequence(Index n, int snapshots, double avg_degree,
                                   std::uint64_t seed) {
  DynamicGraph dyn;
  for (Index v = 0; v < n; ++v) dyn.node_labels.push_back(v);
  Rng rng(seed);
  const std::size_t target_edges = static_cast<std::size_t>(avg_degree * static_cast<double>(n) / 2.0);
  for (int t = 0; t < snapshots; ++t) {
    std::set<EdgeKey> keys;
    std::size_t guard = 0;
    while (keys.size() < target_edges && guard < 50 * target_edges) {
      ++guard;
      Index u = static_cast<Index>(rng.next_index(static_cast<std::size_t>(n)));
      Index v = static_cast<Index>(rng.next_index(static_cast<std::size_t>(n)));
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      keys.emplace(u, v);
    }
    dyn.snapshots.push_back(from_edge_keys(n, keys, t));
  }
  return dyn;
}

}  // namespace ctgcn::testsupport
