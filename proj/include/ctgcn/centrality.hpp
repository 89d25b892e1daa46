#pragma once

#include <string>
#include <vector>

#include "ctgcn/graph.hpp"

namespace ctgcn {

enum class CentralityKind { Closeness, Betweenness, Eigenvector, KCore };

std::string centrality_name(CentralityKind kind);

struct CentralityVector {
  CentralityKind kind;
  std::vector<double> scores;
};

// Closeness with the Wasserman-Faust correction for disconnected graphs:
//   C(u) = ((r - 1) / (n - 1)) * ((r - 1) / sum of BFS distances),
// r = number of nodes reachable from u (including u); isolated nodes score 0.
std::vector<double> closeness_centrality(const SnapshotGraph& g);

// Brandes dependency accumulation over unweighted shortest paths, halved for
// the undirected pair convention.
std::vector<double> betweenness_centrality(const SnapshotGraph& g);

// Power iteration on A + I (the shift breaks bipartite oscillation without
// changing eigenvectors), unit-norm, non-negative orientation. Throws on an
// edgeless graph (degenerate spectrum).
std::vector<double> eigenvector_centrality(const SnapshotGraph& g, double tolerance = 1e-10,
                                           int max_iterations = 10000);

std::vector<double> kcore_centrality(const SnapshotGraph& g);

CentralityVector centrality(const SnapshotGraph& g, CentralityKind kind);

}  // namespace ctgcn
