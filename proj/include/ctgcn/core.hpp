#pragma once

#include <vector>

#include "ctgcn/graph.hpp"
#include "ctgcn/types.hpp"

namespace ctgcn {

// Per-node core numbers plus the nested core-subgraph adjacency chain
//
//   core_adj[k]  = edges of g with both endpoint cores >= k, plus a unit
//                  self-loop on every node (so all matrices share dimension),
//   delta_adj[k] = core_adj[k] - core_adj[k+1]   (no self-loops),
//
// satisfying core_adj[k+1] + delta_adj[k] == core_adj[k] entrywise and the
// containment chain core_adj[k_max] <= ... <= core_adj[0].
struct CoreDecomposition {
  std::vector<int> core_number;
  int k_max = 0;
  std::vector<SparseMatrix> core_adj;   // size k_max + 1 once materialized
  std::vector<SparseMatrix> delta_adj;  // size k_max

  bool has_chain() const { return !core_adj.empty(); }
};

// Degree-bucket peeling in O(|E|); fills core_number and k_max only.
// Degrees are unweighted neighbor counts; ties resolve by ascending node id.
CoreDecomposition core_numbers(const SnapshotGraph& g);

// The expanded k-core adjacency: edges with both endpoint cores >= k plus a
// self-loop of weight 1 on all n nodes. Requires 0 <= k <= k_max.
SparseMatrix core_adjacency(const SnapshotGraph& g, const CoreDecomposition& d, int k);

// delta_adj[k] from a materialized decomposition. Requires 0 <= k < k_max.
SparseMatrix delta_adjacency(const CoreDecomposition& d, int k);

// core_numbers plus materialized core_adj / delta_adj chains.
CoreDecomposition decompose(const SnapshotGraph& g);

}  // namespace ctgcn
