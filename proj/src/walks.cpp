#include "ctgcn/walks.hpp"

#include <algorithm>
#include <cmath>

#include "ctgcn/errors.hpp"

namespace ctgcn {

void WalkConfig::validate() const {
  if (walk_length <= 0 || walks_per_node <= 0 || window <= 0) {
    throw ValidationError("walk config fields must be positive");
  }
  if (window > walk_length) {
    throw ValidationError("walk window " + std::to_string(window) +
                          " exceeds walk length " + std::to_string(walk_length));
  }
}

PairSet sample_walks(const SnapshotGraph& g, const WalkConfig& cfg) {
  cfg.validate();
  const auto* outer = g.adjacency.outerIndexPtr();
  const auto* inner = g.adjacency.innerIndexPtr();

  PairSet set;
  std::vector<Index> walk(static_cast<std::size_t>(cfg.walk_length) + 1);
  for (Index start = 0; start < g.n; ++start) {
    const Index degree = outer[start + 1] - outer[start];
    if (degree == 0) continue;
    Rng rng(derive_seed(cfg.seed, "walk-start", static_cast<std::uint64_t>(start)));
    for (int w = 0; w < cfg.walks_per_node; ++w) {
      walk[0] = start;
      Index cur = start;
      for (int step = 1; step <= cfg.walk_length; ++step) {
        const Index deg = outer[cur + 1] - outer[cur];
        cur = inner[outer[cur] + static_cast<Index>(rng.next_index(static_cast<std::size_t>(deg)))];
        walk[static_cast<std::size_t>(step)] = cur;
      }
      for (std::size_t i = 0; i < walk.size(); ++i) {
        const std::size_t hi = std::min(walk.size() - 1, i + static_cast<std::size_t>(cfg.window));
        for (std::size_t j = i + 1; j <= hi; ++j) {
          if (walk[i] == walk[j]) continue;
          set.pairs.emplace_back(walk[i], walk[j]);
          set.pairs.emplace_back(walk[j], walk[i]);
        }
      }
    }
  }
  return set;
}

NegativeSampler NegativeSampler::from_degrees(const std::vector<int>& degrees, double alpha,
                                              int per_positive) {
  if (per_positive < 0) throw ValidationError("negative sample count Q must be >= 0");
  NegativeSampler sampler;
  sampler.per_positive_ = per_positive;
  sampler.prob_.resize(degrees.size(), 0.0);
  double total = 0.0;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    if (degrees[v] > 0) {
      sampler.prob_[v] = std::pow(static_cast<double>(degrees[v]), alpha);
      total += sampler.prob_[v];
    }
  }
  if (total <= 0.0) {
    throw ValidationError("negative sampler: no node has positive degree");
  }
  sampler.cumulative_.resize(degrees.size());
  double acc = 0.0;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    sampler.prob_[v] /= total;
    acc += sampler.prob_[v];
    sampler.cumulative_[v] = acc;
  }
  sampler.cumulative_.back() = 1.0;
  return sampler;
}

Index NegativeSampler::sample(Rng& rng) const {
  const double u = rng.next_real();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<Index>(std::distance(cumulative_.begin(),
                                          it == cumulative_.end() ? it - 1 : it));
}

}  // namespace ctgcn
