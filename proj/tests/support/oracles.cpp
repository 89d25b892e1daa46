#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace ctgcn::testsupport {

std::vector<int> pruning_core_numbers(const SnapshotGraph& g) {
  const Index n = g.n;
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index row = 0; row < n; ++row) {
    for (SparseMatrix::InnerIterator it(g.adjacency, row); it; ++it) {
      adj[static_cast<std::size_t>(row)].push_back(it.col());
    }
  }
  std::vector<int> core(static_cast<std::size_t>(n), 0);
  std::vector<bool> removed(static_cast<std::size_t>(n), false);
  for (int k = 1;; ++k) {
    std::vector<bool> alive = removed;
    for (std::size_t v = 0; v < alive.size(); ++v) alive[v] = !removed[v];
    bool changed = true;
    while (changed) {
      changed = false;
      for (Index v = 0; v < n; ++v) {
        if (!alive[static_cast<std::size_t>(v)]) continue;
        int deg = 0;
        for (Index u : adj[static_cast<std::size_t>(v)]) {
          if (alive[static_cast<std::size_t>(u)]) ++deg;
        }
        if (deg < k) {
          alive[static_cast<std::size_t>(v)] = false;
          changed = true;
        }
      }
    }
    bool any = false;
    for (Index v = 0; v < n; ++v) {
      if (alive[static_cast<std::size_t>(v)]) {
        core[static_cast<std::size_t>(v)] = k;
        any = true;
      }
    }
    if (!any) break;
  }
  return core;
}

double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  long long pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

namespace {

std::vector<int> bfs_distances(const SnapshotGraph& g, Index source) {
  std::vector<int> dist(static_cast<std::size_t>(g.n), -1);
  std::vector<Index> queue{source};
  dist[static_cast<std::size_t>(source)] = 0;
  std::size_t head = 0;
  while (head < queue.size()) {
    const Index v = queue[head++];
    for (SparseMatrix::InnerIterator it(g.adjacency, v); it; ++it) {
      if (dist[static_cast<std::size_t>(it.col())] < 0) {
        dist[static_cast<std::size_t>(it.col())] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(it.col());
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> bfs_closeness(const SnapshotGraph& g) {
  const Index n = g.n;
  std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
  if (n <= 1) return scores;
  for (Index s = 0; s < n; ++s) {
    const std::vector<int> dist = bfs_distances(g, s);
    long long total = 0;
    long long reachable = 0;
    for (int d : dist) {
      if (d >= 0) {
        total += d;
        ++reachable;
      }
    }
    if (reachable > 1) {
      const double r1 = static_cast<double>(reachable - 1);
      scores[static_cast<std::size_t>(s)] =
          (r1 / static_cast<double>(n - 1)) * (r1 / static_cast<double>(total));
    }
  }
  return scores;
}

std::vector<double> exhaustive_betweenness(const SnapshotGraph& g) {
  const Index n = g.n;
  std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
  for (Index s = 0; s < n; ++s) {
    const std::vector<int> dist = bfs_distances(g, s);
    for (Index t = s + 1; t < n; ++t) {
      if (dist[static_cast<std::size_t>(t)] <= 0) continue;
      // Enumerate every shortest s-t path, tallying interior visits.
      std::vector<long long> through(static_cast<std::size_t>(n), 0);
      long long total_paths = 0;
      std::vector<Index> path{s};
      std::function<void(Index)> walk = [&](Index v) {
        if (v == t) {
          ++total_paths;
          for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            ++through[static_cast<std::size_t>(path[i])];
          }
          return;
        }
        for (SparseMatrix::InnerIterator it(g.adjacency, v); it; ++it) {
          const Index u = it.col();
          if (dist[static_cast<std::size_t>(u)] == dist[static_cast<std::size_t>(v)] + 1 &&
              dist[static_cast<std::size_t>(u)] <= dist[static_cast<std::size_t>(t)]) {
            path.push_back(u);
            walk(u);
            path.pop_back();
          }
        }
      };
      walk(s);
      if (total_paths == 0) continue;
      for (Index v = 0; v < n; ++v) {
        if (through[static_cast<std::size_t>(v)] > 0) {
          scores[static_cast<std::size_t>(v)] +=
              static_cast<double>(through[static_cast<std::size_t>(v)]) /
              static_cast<double>(total_paths);
        }
      }
    }
  }
  return scores;
}

}  // namespace ctgcn::testsupport
