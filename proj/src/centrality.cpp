#include "ctgcn/centrality.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "ctgcn/core.hpp"
#include "ctgcn/errors.hpp"

namespace ctgcn {

std::string centrality_name(CentralityKind kind) {
  switch (kind) {
    case CentralityKind::Closeness: return "closeness";
    case CentralityKind::Betweenness: return "betweenness";
    case CentralityKind::Eigenvector: return "eigenvector";
    case CentralityKind::KCore: return "kcore";
  }
  return "?";
}

std::vector<double> closeness_centrality(const SnapshotGraph& g) {
  const Index n = g.n;
  const auto* outer = g.adjacency.outerIndexPtr();
  const auto* inner = g.adjacency.innerIndexPtr();
  std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
  if (n <= 1) return scores;

  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<Index> frontier;
  for (Index s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(s)] = 0;
    frontier.assign(1, s);
    long long total_dist = 0;
    long long reachable = 1;
    std::size_t head = 0;
    while (head < frontier.size()) {
      const Index v = frontier[head++];
      for (Index e = outer[v]; e < outer[v + 1]; ++e) {
        const Index u = inner[e];
        if (dist[static_cast<std::size_t>(u)] < 0) {
          dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
          total_dist += dist[static_cast<std::size_t>(u)];
          ++reachable;
          frontier.push_back(u);
        }
      }
    }
    if (reachable > 1) {
      const double r1 = static_cast<double>(reachable - 1);
      scores[static_cast<std::size_t>(s)] =
          (r1 / static_cast<double>(n - 1)) * (r1 / static_cast<double>(total_dist));
    }
  }
  return scores;
}

std::vector<double> betweenness_centrality(const SnapshotGraph& g) {
  const Index n = g.n;
  const auto* outer = g.adjacency.outerIndexPtr();
  const auto* inner = g.adjacency.innerIndexPtr();
  std::vector<double> scores(static_cast<std::size_t>(n), 0.0);

  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<double> delta(static_cast<std::size_t>(n));
  std::vector<std::vector<Index>> predecessors(static_cast<std::size_t>(n));
  std::vector<Index> order;  // BFS visit order

  for (Index s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : predecessors) p.clear();
    order.clear();

    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    std::deque<Index> queue{s};
    while (!queue.empty()) {
      const Index v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (Index e = outer[v]; e < outer[v + 1]; ++e) {
        const Index u = inner[e];
        if (dist[static_cast<std::size_t>(u)] < 0) {
          dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(u);
        }
        if (dist[static_cast<std::size_t>(u)] == dist[static_cast<std::size_t>(v)] + 1) {
          sigma[static_cast<std::size_t>(u)] += sigma[static_cast<std::size_t>(v)];
          predecessors[static_cast<std::size_t>(u)].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const Index w = *it;
      for (Index v : predecessors[static_cast<std::size_t>(w)]) {
        delta[static_cast<std::size_t>(v)] +=
            sigma[static_cast<std::size_t>(v)] / sigma[static_cast<std::size_t>(w)] *
            (1.0 + delta[static_cast<std::size_t>(w)]);
      }
      if (w != s) scores[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
    }
  }
  for (double& v : scores) v /= 2.0;  // undirected pairs counted once
  return scores;
}

std::vector<double> eigenvector_centrality(const SnapshotGraph& g, double tolerance,
                                           int max_iterations) {
  if (g.adjacency.nonZeros() == 0) {
    throw ValidationError("eigenvector centrality: graph has no edges (degenerate spectrum)");
  }
  const Index n = g.n;
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Vector next(n);
  for (int iter = 0; iter < max_iterations; ++iter) {
    next = g.adjacency * v + v;  // (A + I) v
    const double norm = next.norm();
    if (norm == 0.0) {
      throw ValidationError("eigenvector centrality: iteration collapsed to zero");
    }
    next /= norm;
    const double diff = (next - v).norm();
    v = next;
    if (diff < tolerance) break;
  }
  // Orient so the dominant entries are non-negative.
  double max_abs = 0.0;
  double signed_max = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(v(i)) > max_abs) {
      max_abs = std::abs(v(i));
      signed_max = v(i);
    }
  }
  if (signed_max < 0.0) v = -v;
  v /= v.norm();
  return {v.data(), v.data() + n};
}

std::vector<double> kcore_centrality(const SnapshotGraph& g) {
  const CoreDecomposition d = core_numbers(g);
  std::vector<double> scores(d.core_number.size());
  for (std::size_t i = 0; i < d.core_number.size(); ++i) {
    scores[i] = static_cast<double>(d.core_number[i]);
  }
  return scores;
}

CentralityVector centrality(const SnapshotGraph& g, CentralityKind kind) {
  switch (kind) {
    case CentralityKind::Closeness: return {kind, closeness_centrality(g)};
    case CentralityKind::Betweenness: return {kind, betweenness_centrality(g)};
    case CentralityKind::Eigenvector: return {kind, eigenvector_centrality(g)};
    case CentralityKind::KCore: return {kind, kcore_centrality(g)};
  }
  throw std::logic_error("unknown centrality kind");
}

}  // namespace ctgcn
