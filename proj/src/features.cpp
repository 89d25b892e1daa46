#include "ctgcn/features.hpp"

#include <algorithm>

namespace ctgcn {

int degree_bin(int degree) {
  int bin = 0;
  int value = degree + 1;
  while (value > 1) {
    value >>= 1;
    ++bin;
  }
  return bin;
}

std::vector<SparseConst> build_features(const DynamicGraph& dyn, const FeatureSpec& spec) {
  const Index n = dyn.node_count();
  std::vector<SparseConst> features;
  features.reserve(dyn.snapshots.size());

  if (spec.kind == FeatureKind::OneHot) {
    SparseConst eye = SparseConst::identity(n);
    for (std::size_t t = 0; t < dyn.snapshots.size(); ++t) features.push_back(eye);
    return features;
  }

  std::vector<std::vector<int>> degrees;
  degrees.reserve(dyn.snapshots.size());
  int max_degree = 0;
  for (const auto& snap : dyn.snapshots) {
    degrees.push_back(degree_vector(snap));
    max_degree = std::max(max_degree, *std::max_element(degrees.back().begin(), degrees.back().end()));
  }
  const Index width = degree_bin(max_degree) + 1;
  for (const auto& deg : degrees) {
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(n));
    for (Index v = 0; v < n; ++v) {
      triplets.emplace_back(v, degree_bin(deg[static_cast<std::size_t>(v)]), 1.0);
    }
    SparseMatrix m(n, width);
    m.setFromTriplets(triplets.begin(), triplets.end());
    features.emplace_back(std::move(m));
  }
  return features;
}

}  // namespace ctgcn
