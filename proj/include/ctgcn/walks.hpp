#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ctgcn/graph.hpp"
#include "ctgcn/rng.hpp"

namespace ctgcn {

struct WalkConfig {
  int walk_length = 10;     // steps per walk (walk visits walk_length + 1 nodes)
  int walks_per_node = 10;  // walks started at every non-isolated node
  int window = 5;           // co-occurrence radius within a walk
  std::uint64_t seed = 0;

  void validate() const;
};

// Ordered co-occurrence pairs (anchor, context) pooled over all walks of one
// snapshot. Walks use uniform neighbor transitions; start nodes draw from
// per-node derived seeds, so the multiset is independent of evaluation order.
struct PairSet {
  std::vector<std::pair<Index, Index>> pairs;

  bool empty() const { return pairs.empty(); }
};

PairSet sample_walks(const SnapshotGraph& g, const WalkConfig& cfg);

// Noise distribution over nodes proportional to degree^alpha; zero-degree
// nodes carry no mass, and Q = per_positive negatives pair with each
// co-occurrence during loss evaluation.
class NegativeSampler {
 public:
  static NegativeSampler from_degrees(const std::vector<int>& degrees, double alpha,
                                      int per_positive);

  Index sample(Rng& rng) const;
  int per_positive() const { return per_positive_; }
  const std::vector<double>& probabilities() const { return prob_; }

 private:
  std::vector<double> prob_;        // normalized mass per node
  std::vector<double> cumulative_;  // inclusive prefix sums
  int per_positive_ = 1;
};

}  // namespace ctgcn
