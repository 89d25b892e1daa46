#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "ctgcn/core.hpp"
#include "ctgcn/errors.hpp"
#include "ctgcn/graph.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "tempdir.hpp"

using namespace ctgcn;
namespace ts = ctgcn::testsupport;

namespace {

// Off-diagonal nonzero pattern containment: every edge of `inner` appears in `outer`.
bool pattern_contained(const SparseMatrix& inner, const SparseMatrix& outer) {
  for (Index row = 0; row < inner.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(inner, row); it; ++it) {
      if (it.col() == row) continue;
      if (outer.coeff(row, it.col()) == 0.0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("loader merges duplicate undirected edges by summing weights") {
  ts::TempDir dir("ctgcn-graph");
  const auto file = dir.write_file("t0.edges", "0 1\n1 0\n");
  const DynamicGraph dyn = load_snapshots({file});
  CHECK(dyn.node_count() == 2);
  CHECK(dyn.snapshots[0].adjacency.coeff(0, 1) == doctest::Approx(2.0));
  CHECK(dyn.snapshots[0].adjacency.coeff(1, 0) == doctest::Approx(2.0));
  CHECK(dyn.snapshots[0].edge_count() == 1);
}

TEST_CASE("node universe is the union across snapshots with isolated retention") {
  ts::TempDir dir("ctgcn-graph");
  const auto f1 = dir.write_file("t0.edges", "0 1\n");
  const auto f2 = dir.write_file("t1.edges", "1 2\n");
  const DynamicGraph dyn = load_snapshots({f1, f2});
  CHECK(dyn.node_count() == 3);
  CHECK(dyn.snapshot_count() == 2);
  CHECK(degree_vector(dyn.snapshots[0]) == std::vector<int>{1, 1, 0});
  CHECK(degree_vector(dyn.snapshots[1]) == std::vector<int>{0, 1, 1});
}

TEST_CASE("loader maps sparse raw ids to a dense universe") {
  ts::TempDir dir("ctgcn-graph");
  const auto file = dir.write_file("t0.edges", "# comment\n10 500 2.5\n500 7\n");
  const DynamicGraph dyn = load_snapshots({file});
  CHECK(dyn.node_labels == std::vector<std::int64_t>{7, 10, 500});
  CHECK(dyn.snapshots[0].adjacency.coeff(1, 2) == doctest::Approx(2.5));
  CHECK(dyn.snapshots[0].adjacency.coeff(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("loader error paths") {
  ts::TempDir dir("ctgcn-graph");
  CHECK_THROWS_AS(load_snapshots({dir.write_file("bad.edges", "0 x\n")}), ParseError);
  CHECK_THROWS_AS(load_snapshots({dir.write_file("neg.edges", "0 1 -2\n")}), ValidationError);
  CHECK_THROWS_AS(load_snapshots({dir.write_file("empty.edges", "# nothing\n")}),
                  ValidationError);
  CHECK_THROWS_AS(load_snapshots({dir.write_file("arity.edges", "0 1 2 3\n")}), ParseError);
  CHECK_THROWS_AS(load_snapshots({}), ValidationError);
}

TEST_CASE("manifest loads snapshots in listed order") {
  ts::TempDir dir("ctgcn-graph");
  dir.write_file("a.edges", "0 1\n");
  dir.write_file("b.edges", "1 2\n");
  const auto manifest = dir.write_file("manifest.txt", "# files\na.edges\nb.edges\n");
  const DynamicGraph dyn = load_manifest(manifest);
  CHECK(dyn.snapshot_count() == 2);
  CHECK(dyn.snapshots[0].timestamp_index == 0);
  CHECK(dyn.snapshots[1].timestamp_index == 1);
}

TEST_CASE("self-loop input lines are dropped, diagonal stays empty") {
  const SnapshotGraph g = make_snapshot(3, {{0, 0, 1.0}, {0, 1, 1.0}});
  CHECK(g.adjacency.coeff(0, 0) == 0.0);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("core numbers on canonical graphs") {
  const CoreDecomposition tri = core_numbers(ts::triangle());
  CHECK(tri.core_number == std::vector<int>{2, 2, 2});
  CHECK(tri.k_max == 2);

  const CoreDecomposition path = core_numbers(ts::path_graph(3));
  CHECK(path.core_number == std::vector<int>{1, 1, 1});
  CHECK(path.k_max == 1);

  const CoreDecomposition pend = core_numbers(ts::triangle_with_pendant());
  CHECK(pend.core_number == std::vector<int>{2, 2, 2, 1});
}

TEST_CASE("core numbers match the iterative pruning oracle on random graphs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SnapshotGraph g = ts::random_graph(30, 0.2, seed);
    CHECK(core_numbers(g).core_number == ts::pruning_core_numbers(g));
  }
}

TEST_CASE("core numbers are invariant under node relabeling") {
  const SnapshotGraph g = ts::random_graph(25, 0.25, 99);
  Rng rng(7);
  std::vector<Index> perm(25);
  std::iota(perm.begin(), perm.end(), Index{0});
  rng.shuffle(perm);
  std::vector<Edge> permuted;
  for (Index row = 0; row < g.n; ++row) {
    for (SparseMatrix::InnerIterator it(g.adjacency, row); it; ++it) {
      if (row < it.col()) {
        permuted.push_back({perm[static_cast<std::size_t>(row)],
                            perm[static_cast<std::size_t>(it.col())], 1.0});
      }
    }
  }
  const auto base = core_numbers(g).core_number;
  const auto mapped = core_numbers(make_snapshot(25, permuted)).core_number;
  for (Index v = 0; v < g.n; ++v) {
    CHECK(base[static_cast<std::size_t>(v)] ==
          mapped[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])]);
  }
}

TEST_CASE("every node of the k-core keeps induced degree >= k") {
  const SnapshotGraph g = ts::random_graph(40, 0.15, 5);
  const CoreDecomposition d = core_numbers(g);
  for (int k = 0; k <= d.k_max; ++k) {
    for (Index v = 0; v < g.n; ++v) {
      if (d.core_number[static_cast<std::size_t>(v)] < k) continue;
      int induced = 0;
      for (SparseMatrix::InnerIterator it(g.adjacency, v); it; ++it) {
        if (d.core_number[static_cast<std::size_t>(it.col())] >= k) ++induced;
      }
      CHECK(induced >= k);
    }
  }
}

TEST_CASE("core adjacency adds self-loops everywhere and filters by core") {
  const SnapshotGraph g = ts::triangle_with_pendant();
  const CoreDecomposition d = core_numbers(g);

  const SparseMatrix a0 = core_adjacency(g, d, 0);
  SparseMatrix expected = g.adjacency;
  SparseMatrix eye(g.n, g.n);
  eye.setIdentity();
  expected += eye;
  CHECK((a0 - expected).norm() == doctest::Approx(0.0));

  const SparseMatrix a2 = core_adjacency(g, d, 2);
  CHECK(a2.coeff(0, 1) == 1.0);
  CHECK(a2.coeff(0, 3) == 0.0);  // pendant has core 1
  for (Index v = 0; v < g.n; ++v) CHECK(a2.coeff(v, v) == 1.0);

  CHECK_THROWS_AS(core_adjacency(g, d, 3), std::domain_error);
  CHECK_THROWS_AS(core_adjacency(g, d, -1), std::domain_error);
}

TEST_CASE("delta adjacency is the pendant edge on triangle-with-pendant") {
  const SnapshotGraph g = ts::triangle_with_pendant();
  const CoreDecomposition d = decompose(g);
  const SparseMatrix delta1 = delta_adjacency(d, 1);
  CHECK(delta1.nonZeros() == 2);
  CHECK(delta1.coeff(0, 3) == 1.0);
  CHECK(delta1.coeff(3, 0) == 1.0);
  for (Index v = 0; v < g.n; ++v) CHECK(delta1.coeff(v, v) == 0.0);
  CHECK_THROWS_AS(delta_adjacency(d, d.k_max), std::domain_error);
}

TEST_CASE("delta is empty where consecutive cores coincide") {
  // K4: every node has core 3 ... k=0,1,2 deltas are all empty.
  const CoreDecomposition d = decompose(ts::complete_graph(4));
  CHECK(d.k_max == 3);
  for (int k = 0; k < d.k_max; ++k) CHECK(delta_adjacency(d, k).nonZeros() == 0);
}

TEST_CASE("nested chain and reconstruction invariants on random graphs") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const SnapshotGraph g = ts::random_weighted_graph(35, 0.15, seed);
    const CoreDecomposition d = decompose(g);
    Index delta_nnz_total = 0;
    for (int k = 0; k < d.k_max; ++k) {
      const auto& outer_adj = d.core_adj[static_cast<std::size_t>(k)];
      const auto& inner_adj = d.core_adj[static_cast<std::size_t>(k) + 1];
      CHECK(pattern_contained(inner_adj, outer_adj));
      const SparseMatrix reconstructed = inner_adj + d.delta_adj[static_cast<std::size_t>(k)];
      CHECK((reconstructed - outer_adj).norm() == doctest::Approx(0.0).epsilon(1e-12));
      delta_nnz_total += d.delta_adj[static_cast<std::size_t>(k)].nonZeros();
    }
    CHECK(delta_nnz_total + d.core_adj[static_cast<std::size_t>(d.k_max)].nonZeros() ==
          d.core_adj[0].nonZeros());
  }
}

TEST_CASE("degree vector equals row nonzero counts") {
  const SnapshotGraph g = ts::random_graph(30, 0.2, 3);
  const std::vector<int> deg = degree_vector(g);
  for (Index v = 0; v < g.n; ++v) {
    int count = 0;
    for (SparseMatrix::InnerIterator it(g.adjacency, v); it; ++it) ++count;
    CHECK(deg[static_cast<std::size_t>(v)] == count);
  }
  CHECK(degree_vector(ts::star_graph(4))[0] == 4);
}

TEST_CASE("union graph covers all snapshot edges") {
  ts::TempDir dir("ctgcn-graph");
  const auto f1 = dir.write_file("t0.edges", "0 1\n");
  const auto f2 = dir.write_file("t1.edges", "1 2\n0 1\n");
  const DynamicGraph dyn = load_snapshots({f1, f2});
  const SnapshotGraph u = union_graph(dyn);
  CHECK(u.adjacency.coeff(0, 1) == doctest::Approx(2.0));
  CHECK(u.adjacency.coeff(1, 2) == doctest::Approx(1.0));
}
