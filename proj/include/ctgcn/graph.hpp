#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ctgcn/types.hpp"

namespace ctgcn {

// One undirected weighted edge between raw (file-level) node ids.
struct Edge {
  std::int64_t u = 0;
  std::int64_t v = 0;
  Real weight = 1.0;
};

// One graph snapshot over the fixed node universe. The adjacency is symmetric
// CSR with strictly positive weights and an empty diagonal; self-loops enter
// only through core_adjacency.
struct SnapshotGraph {
  Index n = 0;
  int timestamp_index = 0;
  SparseMatrix adjacency;

  Index node_count() const { return n; }
  Index edge_count() const { return adjacency.nonZeros() / 2; }
};

// An ordered snapshot sequence sharing one node universe. node_labels maps the
// dense internal NodeId back to the id seen in the input files (ascending).
struct DynamicGraph {
  std::vector<SnapshotGraph> snapshots;
  std::vector<std::int64_t> node_labels;

  Index node_count() const { return snapshots.empty() ? 0 : snapshots.front().n; }
  int snapshot_count() const { return static_cast<int>(snapshots.size()); }
};

// Builds one snapshot from an edge list over dense node ids in [0, n).
// Duplicate undirected edges merge by summing weights; self-loops are dropped.
// Throws ValidationError on negative/zero weights or out-of-range endpoints.
SnapshotGraph make_snapshot(Index n, const std::vector<Edge>& edges, int timestamp_index = 0);

// Parses one edge-list file: `src dst [weight]` per line, `#` comments,
// weight defaults to 1.0. Throws ParseError with line context.
std::vector<Edge> read_edge_list(const std::filesystem::path& file);

// Loads a snapshot sequence from edge-list files given in ascending time
// order. The node universe is the union of endpoints across all files; nodes
// absent from a snapshot stay as isolated vertices.
DynamicGraph load_snapshots(const std::vector<std::filesystem::path>& files);

// Reads a manifest (one edge-list path per line, relative to the manifest's
// directory) and loads the listed snapshots in order.
DynamicGraph load_manifest(const std::filesystem::path& manifest);

// Unweighted degree (neighbor count) per node; isolated nodes report 0.
std::vector<int> degree_vector(const SnapshotGraph& g);

// Union of all snapshot edge sets (weights summed), timestamp_index = -1.
SnapshotGraph union_graph(const DynamicGraph& dyn);

}  // namespace ctgcn
