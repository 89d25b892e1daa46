#pragma once

#include <vector>

#include "ctgcn/graph.hpp"
#include "ctgcn/tensor.hpp"

namespace ctgcn {

enum class FeatureKind { OneHot, DegreeBased };

struct FeatureSpec {
  FeatureKind kind = FeatureKind::OneHot;
};

// Log-binned degree indicator: bin(deg) = floor(log2(deg + 1)).
int degree_bin(int degree);

// Per-snapshot sparse feature matrices.
//   one_hot: the n x n identity, identical across snapshots.
//   degree_based: n x B indicators with column bin(deg_t(v)) set, where
//   B = bin(D_max) + 1 and D_max is the maximal degree over all snapshots,
//   so widths agree across snapshots.
std::vector<SparseConst> build_features(const DynamicGraph& dyn, const FeatureSpec& spec);

}  // namespace ctgcn
