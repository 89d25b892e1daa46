#include "ctgcn/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ctgcn/errors.hpp"

namespace ctgcn {

CoreDecomposition core_numbers(const SnapshotGraph& g) {
  const Index n = g.n;
  std::vector<int> deg = degree_vector(g);
  const int max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());

  // Batagelj-Zaversnik bin sort. vert holds nodes ordered by current degree;
  // iterating nodes in ascending id per degree bucket fixes the tie order.
  std::vector<Index> bin(static_cast<std::size_t>(max_deg) + 2, 0);
  for (Index v = 0; v < n; ++v) ++bin[static_cast<std::size_t>(deg[v]) + 1];
  for (std::size_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];

  std::vector<Index> vert(static_cast<std::size_t>(n));
  std::vector<Index> pos(static_cast<std::size_t>(n));
  {
    std::vector<Index> next = bin;
    for (Index v = 0; v < n; ++v) {
      pos[v] = next[static_cast<std::size_t>(deg[v])]++;
      vert[pos[v]] = v;
    }
  }

  std::vector<int> core = deg;
  const auto* outer = g.adjacency.outerIndexPtr();
  const auto* inner = g.adjacency.innerIndexPtr();
  for (Index i = 0; i < n; ++i) {
    const Index v = vert[i];
    core[v] = deg[v];
    for (Index e = outer[v]; e < outer[v + 1]; ++e) {
      const Index u = inner[e];
      if (deg[u] > deg[v]) {
        // Swap u with the first node of its degree bucket, then shrink it.
        const Index du = deg[u];
        const Index pu = pos[u];
        const Index pw = bin[static_cast<std::size_t>(du)];
        const Index w = vert[pw];
        if (u != w) {
          std::swap(vert[pu], vert[pw]);
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[static_cast<std::size_t>(du)];
        --deg[u];
      }
    }
  }

  CoreDecomposition d;
  d.core_number = std::move(core);
  d.k_max = d.core_number.empty()
                ? 0
                : *std::max_element(d.core_number.begin(), d.core_number.end());
  return d;
}

SparseMatrix core_adjacency(const SnapshotGraph& g, const CoreDecomposition& d, int k) {
  if (k < 0 || k > d.k_max) {
    throw std::domain_error("core_adjacency: k=" + std::to_string(k) + " outside [0, " +
                            std::to_string(d.k_max) + "]");
  }
  const Index n = g.n;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(g.adjacency.nonZeros()) + static_cast<std::size_t>(n));
  for (Index row = 0; row < n; ++row) {
    if (d.core_number[row] >= k) {
      for (SparseMatrix::InnerIterator it(g.adjacency, row); it; ++it) {
        if (d.core_number[it.col()] >= k) triplets.emplace_back(row, it.col(), it.value());
      }
    }
    triplets.emplace_back(row, row, 1.0);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

SparseMatrix delta_adjacency(const CoreDecomposition& d, int k) {
  if (k < 0 || k >= d.k_max) {
    throw std::domain_error("delta_adjacency: k=" + std::to_string(k) +
                            " has no successor core (k_max=" + std::to_string(d.k_max) + ")");
  }
  if (!d.has_chain()) {
    throw std::logic_error("delta_adjacency: decomposition chain not materialized; use decompose()");
  }
  return d.delta_adj[static_cast<std::size_t>(k)];
}

CoreDecomposition decompose(const SnapshotGraph& g) {
  CoreDecomposition d = core_numbers(g);
  const Index n = g.n;

  // Bucket every edge by min endpoint core: the edge belongs to core_adj[k]
  // for all k <= that minimum and to exactly one delta matrix.
  std::vector<std::vector<Triplet>> by_core(static_cast<std::size_t>(d.k_max) + 1);
  for (Index row = 0; row < n; ++row) {
    for (SparseMatrix::InnerIterator it(g.adjacency, row); it; ++it) {
      const int c = std::min(d.core_number[row], d.core_number[it.col()]);
      by_core[static_cast<std::size_t>(c)].emplace_back(row, it.col(), it.value());
    }
  }

  d.core_adj.resize(static_cast<std::size_t>(d.k_max) + 1);
  d.delta_adj.resize(static_cast<std::size_t>(d.k_max));
  std::vector<Triplet> acc;
  acc.reserve(static_cast<std::size_t>(g.adjacency.nonZeros()) + static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) acc.emplace_back(v, v, 1.0);
  for (int k = d.k_max; k >= 0; --k) {
    auto& bucket = by_core[static_cast<std::size_t>(k)];
    acc.insert(acc.end(), bucket.begin(), bucket.end());
    SparseMatrix m(n, n);
    m.setFromTriplets(acc.begin(), acc.end());
    m.makeCompressed();
    d.core_adj[static_cast<std::size_t>(k)] = std::move(m);
    if (k < d.k_max) {
      SparseMatrix delta(n, n);
      delta.setFromTriplets(bucket.begin(), bucket.end());
      delta.makeCompressed();
      d.delta_adj[static_cast<std::size_t>(k)] = std::move(delta);
    }
  }
  return d;
}

}  // namespace ctgcn
