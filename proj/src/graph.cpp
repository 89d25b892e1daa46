#include "ctgcn/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ctgcn/errors.hpp"

namespace ctgcn {

namespace {

bool parse_int(std::string_view token, std::int64_t& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_real(std::string_view token, Real& out) {
  try {
    std::size_t used = 0;
    out = std::stod(std::string(token), &used);
    return used == token.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

SnapshotGraph make_snapshot(Index n, const std::vector<Edge>& edges, int timestamp_index) {
  if (n <= 0) throw ValidationError("snapshot must cover at least one node");
  std::vector<Triplet> triplets;
  triplets.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw ValidationError("edge endpoint out of range: " + std::to_string(e.u) + " " +
                            std::to_string(e.v) + " (n=" + std::to_string(n) + ")");
    }
    if (!(e.weight > 0.0)) {
      throw ValidationError("edge weight must be positive, got " + std::to_string(e.weight));
    }
    if (e.u == e.v) continue;  // diagonal stays empty
    triplets.emplace_back(e.u, e.v, e.weight);
    triplets.emplace_back(e.v, e.u, e.weight);
  }
  SnapshotGraph g;
  g.n = n;
  g.timestamp_index = timestamp_index;
  g.adjacency.resize(n, n);
  g.adjacency.setFromTriplets(triplets.begin(), triplets.end());  // duplicates sum
  g.adjacency.makeCompressed();
  return g;
}

std::vector<Edge> read_edge_list(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open edge list: " + file.string());
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(file.string() + ":" + std::to_string(line_no) +
                       ": expected `src dst [weight]`, got `" + line + "`");
    }
    Edge e;
    if (!parse_int(tokens[0], e.u) || !parse_int(tokens[1], e.v) || e.u < 0 || e.v < 0) {
      throw ParseError(file.string() + ":" + std::to_string(line_no) +
                       ": node ids must be non-negative integers");
    }
    if (tokens.size() == 3) {
      if (!parse_real(tokens[2], e.weight)) {
        throw ParseError(file.string() + ":" + std::to_string(line_no) + ": bad weight `" +
                         std::string(tokens[2]) + "`");
      }
      if (e.weight < 0.0) {
        throw ValidationError(file.string() + ":" + std::to_string(line_no) +
                              ": negative edge weights are not supported");
      }
      if (e.weight == 0.0) {
        throw ValidationError(file.string() + ":" + std::to_string(line_no) +
                              ": zero-weight edges are not representable");
      }
    }
    edges.push_back(e);
  }
  return edges;
}

DynamicGraph load_snapshots(const std::vector<std::filesystem::path>& files) {
  if (files.empty()) throw ValidationError("no snapshot files given");
  std::vector<std::vector<Edge>> per_file;
  per_file.reserve(files.size());
  std::vector<std::int64_t> labels;
  for (const auto& file : files) {
    per_file.push_back(read_edge_list(file));
    for (const Edge& e : per_file.back()) {
      labels.push_back(e.u);
      labels.push_back(e.v);
    }
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.empty()) throw ValidationError("empty input: no edges in any snapshot file");

  std::map<std::int64_t, Index> to_dense;
  for (std::size_t i = 0; i < labels.size(); ++i) to_dense.emplace(labels[i], static_cast<Index>(i));

  DynamicGraph dyn;
  dyn.node_labels = std::move(labels);
  const Index n = static_cast<Index>(dyn.node_labels.size());
  for (std::size_t t = 0; t < per_file.size(); ++t) {
    std::vector<Edge> dense_edges;
    dense_edges.reserve(per_file[t].size());
    for (const Edge& e : per_file[t]) {
      dense_edges.push_back({to_dense.at(e.u), to_dense.at(e.v), e.weight});
    }
    dyn.snapshots.push_back(make_snapshot(n, dense_edges, static_cast<int>(t)));
  }
  return dyn;
}

DynamicGraph load_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw ParseError("cannot open manifest: " + manifest.string());
  std::vector<std::filesystem::path> files;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    std::filesystem::path p{line.substr(first, last - first + 1)};
    if (p.is_relative()) p = manifest.parent_path() / p;
    files.push_back(p);
  }
  if (files.empty()) throw ValidationError("manifest lists no snapshot files: " + manifest.string());
  return load_snapshots(files);
}

std::vector<int> degree_vector(const SnapshotGraph& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.n), 0);
  for (Index row = 0; row < g.adjacency.outerSize(); ++row) {
    deg[static_cast<std::size_t>(row)] =
        static_cast<int>(g.adjacency.outerIndexPtr()[row + 1] - g.adjacency.outerIndexPtr()[row]);
  }
  return deg;
}

SnapshotGraph union_graph(const DynamicGraph& dyn) {
  if (dyn.snapshots.empty()) throw ValidationError("union of an empty snapshot sequence");
  const Index n = dyn.node_count();
  SparseMatrix acc(n, n);
  for (const auto& snap : dyn.snapshots) acc += snap.adjacency;
  SnapshotGraph g;
  g.n = n;
  g.timestamp_index = -1;
  g.adjacency = std::move(acc);
  g.adjacency.makeCompressed();
  return g;
}

}  // namespace ctgcn
