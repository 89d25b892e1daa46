#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <numeric>

#include "ctgcn/features.hpp"
#include "ctgcn/model.hpp"
#include "generators.hpp"
#include "gradcheck.hpp"

using namespace ctgcn;
namespace ts = ctgcn::testsupport;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.next_uniform(-1.0, 1.0);
  }
  return m;
}

Matrix relu_ref(const Matrix& m) { return m.cwiseMax(0.0); }

}  // namespace

TEST_CASE("gcn layer: edgeless graph with identity weight acts as relu") {
  const SnapshotGraph edgeless = make_snapshot(3, {});

  LinearLayer layer;
  layer.weight = Tensor::leaf(Matrix::Identity(3, 3), true);
  layer.bias = Tensor::zeros(1, 3, true);
  const Matrix x = Matrix::Identity(3, 3);

  Tape tape;
  const Tensor out = gcn_layer_forward(tape, gcn_normalized_adjacency(edgeless),
                                       Tensor::leaf(x), layer);
  CHECK((out.value() - relu_ref(x)).norm() == doctest::Approx(0.0));
}

TEST_CASE("gcn layer: two-node edge with uniform features gives equal rows") {
  const SnapshotGraph g = make_snapshot(2, {{0, 1, 1.0}});
  Rng rng(3);
  const LinearLayer layer = LinearLayer::init(2, 4, rng);
  Tape tape;
  const Tensor out =
      gcn_layer_forward(tape, gcn_normalized_adjacency(g), Tensor::leaf(Matrix::Ones(2, 2)), layer);
  CHECK((out.value().row(0) - out.value().row(1)).norm() == doctest::Approx(0.0));
}

TEST_CASE("gcn layer matches a dense reference implementation") {
  const SnapshotGraph g = ts::random_weighted_graph(12, 0.3, 17);
  Rng rng(4);
  const LinearLayer layer = LinearLayer::init(5, 3, rng);
  const Matrix x = random_matrix(12, 5, 5);

  Tape tape;
  const Tensor out =
      gcn_layer_forward(tape, gcn_normalized_adjacency(g), Tensor::leaf(x), layer);

  // Dense recomputation straight from the formula.
  Matrix a_tilde = Matrix(g.adjacency) + Matrix::Identity(12, 12);
  Vector deg = a_tilde.rowwise().sum();
  Matrix a_hat = a_tilde;
  for (Index i = 0; i < 12; ++i) {
    for (Index j = 0; j < 12; ++j) {
      a_hat(i, j) /= std::sqrt(deg(i)) * std::sqrt(deg(j));
    }
  }
  Matrix expected =
      relu_ref(((a_hat * (x * layer.weight.value())).rowwise() +
                RowVector(layer.bias.value().row(0)))
                   .eval());
  CHECK((out.value() - expected).norm() < 1e-10);
}

TEST_CASE("GRU with all-zero input, state and weights stays zero") {
  RecurrentCell cell;
  cell.kind = CellKind::Gru;
  cell.input_dim = 3;
  cell.hidden_dim = 3;
  for (int g = 0; g < 3; ++g) {
    cell.gates.push_back({Tensor::zeros(3, 3, true), Tensor::zeros(3, 3, true),
                          Tensor::zeros(1, 3, true)});
  }
  Tape tape;
  const RecurrentState next = cell.step(tape, Tensor::zeros(4, 3), cell.zero_state(4));
  CHECK(next.hidden.value().norm() == doctest::Approx(0.0));
}

TEST_CASE("GRU update gate saturated low keeps the previous hidden state") {
  Rng rng(11);
  RecurrentCell cell = RecurrentCell::init(CellKind::Gru, 4, 4, rng);
  cell.gates[0].b.mutable_value().setConstant(-30.0);  // update gate ~ 0
  const Tensor input = Tensor::leaf(random_matrix(5, 4, 12));
  RecurrentState prev;
  prev.hidden = Tensor::leaf(random_matrix(5, 4, 13));
  Tape tape;
  const RecurrentState next = cell.step(tape, input, prev);
  CHECK((next.hidden.value() - prev.hidden.value()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("GRU gradients through three chained steps match finite differences") {
  Rng rng(21);
  const RecurrentCell cell = RecurrentCell::init(CellKind::Gru, 3, 3, rng);
  const Tensor x0 = Tensor::leaf(random_matrix(4, 3, 22), true);
  const Tensor x1 = Tensor::leaf(random_matrix(4, 3, 23));
  const Tensor x2 = Tensor::leaf(random_matrix(4, 3, 24));

  std::vector<Tensor> params;
  for (const auto& gate : cell.gates) {
    params.push_back(gate.w);
    params.push_back(gate.u);
    params.push_back(gate.b);
  }
  params.push_back(x0);

  const double err = ts::gradcheck_max_rel_err(params, [&](Tape& tape) {
    RecurrentState state = cell.zero_state(4);
    state = cell.step(tape, x0, state);
    state = cell.step(tape, x1, state);
    state = cell.step(tape, x2, state);
    return tape.frobenius_sq(state.hidden);
  });
  CHECK(err < 1e-4);
}

TEST_CASE("LSTM gradients through chained steps match finite differences") {
  Rng rng(31);
  const RecurrentCell cell = RecurrentCell::init(CellKind::Lstm, 3, 3, rng);
  const Tensor x0 = Tensor::leaf(random_matrix(4, 3, 32), true);
  const Tensor x1 = Tensor::leaf(random_matrix(4, 3, 33));

  std::vector<Tensor> params;
  for (const auto& gate : cell.gates) {
    params.push_back(gate.w);
    params.push_back(gate.u);
    params.push_back(gate.b);
  }
  params.push_back(x0);

  const double err = ts::gradcheck_max_rel_err(params, [&](Tape& tape) {
    RecurrentState state = cell.zero_state(4);
    state = cell.step(tape, x0, state);
    state = cell.step(tape, x1, state);
    return tape.frobenius_sq(state.hidden);
  });
  CHECK(err < 1e-4);
}

TEST_CASE("cgcn single-core reduction equals plain propagation") {
  // Edgeless graph: k_max = 0, so the only core is A_0 = I.
  const SnapshotGraph edgeless = make_snapshot(4, {});
  const CoreDecomposition d0 = decompose(edgeless);
  CHECK(d0.k_max == 0);

  CgcnLayer layer;
  layer.aggregation = CoreAggregation::Sum;
  layer.propagation_activation = Activation::Identity;
  const Matrix x = random_matrix(4, 3, 41);
  Tape tape;
  const auto out = layer.forward(tape, d0, Tensor::leaf(x));
  CHECK((out.aggregated.value() - x).norm() == doctest::Approx(0.0));

  // Star graph truncated to its densest core: A_1 == A_0, one propagation.
  const SnapshotGraph star = ts::star_graph(4);
  const CoreDecomposition ds = decompose(star);
  CHECK(ds.k_max == 1);
  CgcnLayer one_core;
  one_core.aggregation = CoreAggregation::Sum;
  one_core.propagation_activation = Activation::Identity;
  one_core.max_cores = 1;
  const Matrix xs = random_matrix(5, 3, 42);
  Tape tape2;
  const auto star_out = one_core.forward(tape2, ds, Tensor::leaf(xs));
  const Matrix expected = (Matrix(star.adjacency) + Matrix::Identity(5, 5)) * xs;
  CHECK((star_out.aggregated.value() - expected).norm() < 1e-12);
}

TEST_CASE("cgcn zero features give zero output in both modes") {
  const CoreDecomposition d = decompose(ts::random_graph(8, 0.4, 43));
  const Tensor zero_x = Tensor::zeros(8, 3);

  CgcnLayer sum_layer;
  sum_layer.aggregation = CoreAggregation::Sum;
  Tape tape;
  CHECK(sum_layer.forward(tape, d, zero_x).aggregated.value().norm() == doctest::Approx(0.0));

  Rng rng(44);
  CgcnLayer rnn_layer;
  rnn_layer.aggregation = CoreAggregation::Rnn;
  rnn_layer.core_cell = RecurrentCell::init(CellKind::Gru, 3, 3, rng);
  Tape tape2;
  CHECK(rnn_layer.forward(tape2, d, zero_x).aggregated.value().norm() == doctest::Approx(0.0));
}

TEST_CASE("delta-incremental propagation equals direct per-core propagation") {
  const SnapshotGraph g = ts::random_weighted_graph(20, 0.25, 45);
  const CoreDecomposition d = decompose(g);
  REQUIRE(d.k_max >= 2);

  Rng rng(46);
  CgcnLayer layer;
  layer.transform = MlpTransform::init({5, 4}, Activation::Identity, rng);
  layer.aggregation = CoreAggregation::Sum;
  layer.propagation_activation = Activation::Relu;
  const Matrix x = random_matrix(20, 5, 47);

  Tape tape;
  const auto out = layer.forward(tape, d, Tensor::leaf(x));

  // Direct route: sigma(A_k Z) from scratch for every core.
  Tape ref_tape;
  const Tensor z = layer.transform.forward(ref_tape, Tensor::leaf(x));
  Matrix expected = Matrix::Zero(20, 4);
  for (int k = d.k_max; k >= 0; --k) {
    const Matrix prod = Matrix(d.core_adj[static_cast<std::size_t>(k)]) * z.value();
    expected += relu_ref(prod);
  }
  CHECK((out.aggregated.value() - expected).norm() < 1e-10);
}

TEST_CASE("cgcn max_cores truncation uses the densest cores") {
  const SnapshotGraph g = ts::random_graph(15, 0.4, 48);
  const CoreDecomposition d = decompose(g);
  REQUIRE(d.k_max >= 2);

  CgcnLayer layer;
  layer.aggregation = CoreAggregation::Sum;
  layer.propagation_activation = Activation::Identity;
  layer.max_cores = 2;
  const Matrix x = random_matrix(15, 3, 49);
  Tape tape;
  const auto out = layer.forward(tape, d, Tensor::leaf(x));
  const Matrix expected =
      Matrix(d.core_adj[static_cast<std::size_t>(d.k_max)]) * x +
      Matrix(d.core_adj[static_cast<std::size_t>(d.k_max - 1)]) * x;
  CHECK((out.aggregated.value() - expected).norm() < 1e-12);
}

namespace {

struct TinyRun {
  std::vector<SnapshotContext> contexts;
  std::vector<LayerInput> features;
  DynamicGraph dyn;
};

TinyRun make_tiny_run(Variant variant, int T, Index n, std::uint64_t seed) {
  TinyRun run;
  run.dyn = ts::two_community_sequence(n, T, 0.5, 0.2, 0.2, seed);
  for (const auto& snap : run.dyn.snapshots) {
    run.contexts.push_back(make_snapshot_context(variant, snap));
  }
  const auto feats = build_features(run.dyn, {FeatureKind::OneHot});
  run.features.assign(feats.begin(), feats.end());
  return run;
}

}  // namespace

TEST_CASE("ctgcn forward with T=1 equals one temporal step from zero state") {
  const TinyRun run = make_tiny_run(Variant::CtgcnC, 1, 8, 51);
  ModelConfig mc;
  mc.variant = Variant::CtgcnC;
  mc.feature_dim = 8;
  mc.embedding_dim = 4;
  Rng rng(52);
  const CtgcnModel model = CtgcnModel::init(mc, rng);

  Tape tape;
  const ForwardOutput out = ctgcn_forward(tape, model, run.contexts, run.features);
  Tape ref;
  const auto snap = model.snapshot_forward(ref, run.contexts[0], run.features[0]);
  const RecurrentState state =
      model.temporal_cell->step(ref, snap.aggregated, model.temporal_cell->zero_state(8));
  CHECK((out.h_outputs[0].value() - state.hidden.value()).norm() == doctest::Approx(0.0));
}

TEST_CASE("ctgcn forward is bitwise deterministic under a fixed seed") {
  auto build = [&]() {
    const TinyRun run = make_tiny_run(Variant::CtgcnC, 3, 10, 53);
    ModelConfig mc;
    mc.variant = Variant::CtgcnC;
    mc.feature_dim = 10;
    mc.embedding_dim = 4;
    Rng rng(54);
    const CtgcnModel model = CtgcnModel::init(mc, rng);
    Tape tape;
    return ctgcn_forward(tape, model, run.contexts, run.features).h_outputs.back().value();
  };
  const Matrix a = build();
  const Matrix b = build();
  CHECK(std::memcmp(a.data(), b.data(), sizeof(Real) * a.size()) == 0);
}

TEST_CASE("ctgcn output at time t ignores later snapshots") {
  TinyRun run = make_tiny_run(Variant::CtgcnC, 3, 10, 55);
  ModelConfig mc;
  mc.variant = Variant::CtgcnC;
  mc.feature_dim = 10;
  mc.embedding_dim = 4;
  Rng rng(56);
  const CtgcnModel model = CtgcnModel::init(mc, rng);

  Tape tape;
  const Matrix h1 = ctgcn_forward(tape, model, run.contexts, run.features)
                        .h_outputs[1]
                        .value();

  // Perturb snapshot 2 heavily and recompute.
  run.contexts[2] = make_snapshot_context(Variant::CtgcnC, ts::complete_graph(10));
  Tape tape2;
  const Matrix h1_again = ctgcn_forward(tape2, model, run.contexts, run.features)
                              .h_outputs[1]
                              .value();
  CHECK(std::memcmp(h1.data(), h1_again.data(), sizeof(Real) * h1.size()) == 0);
}

TEST_CASE("ctgcn-c end-to-end gradients match finite differences") {
  const TinyRun run = make_tiny_run(Variant::CtgcnC, 3, 10, 57);
  ModelConfig mc;
  mc.variant = Variant::CtgcnC;
  mc.feature_dim = 10;
  mc.embedding_dim = 4;
  Rng rng(58);
  const CtgcnModel model = CtgcnModel::init(mc, rng);

  const double err = ts::gradcheck_max_rel_err(model.parameters(), [&](Tape& tape) {
    const ForwardOutput out = ctgcn_forward(tape, model, run.contexts, run.features);
    Tensor loss = tape.frobenius_sq(out.h_outputs[0]);
    for (std::size_t t = 1; t < out.h_outputs.size(); ++t) {
      loss = tape.add(loss, tape.frobenius_sq(out.h_outputs[t]));
    }
    return loss;
  });
  CHECK(err < 1e-4);
}

TEST_CASE("layer outputs are permutation equivariant") {
  const Index n = 9;
  const SnapshotGraph g = ts::random_weighted_graph(n, 0.35, 61);
  Rng perm_rng(62);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  perm_rng.shuffle(perm);

  std::vector<Edge> permuted_edges;
  for (Index row = 0; row < n; ++row) {
    for (SparseMatrix::InnerIterator it(g.adjacency, row); it; ++it) {
      if (row < it.col()) {
        permuted_edges.push_back({perm[static_cast<std::size_t>(row)],
                                  perm[static_cast<std::size_t>(it.col())], it.value()});
      }
    }
  }
  const SnapshotGraph pg = make_snapshot(n, permuted_edges);

  const Matrix x = random_matrix(n, 4, 63);
  Matrix px(n, 4);
  for (Index v = 0; v < n; ++v) px.row(perm[static_cast<std::size_t>(v)]) = x.row(v);

  Rng rng(64);
  CgcnLayer layer;
  layer.transform = MlpTransform::init({4, 3}, Activation::Identity, rng);
  layer.core_cell = RecurrentCell::init(CellKind::Gru, 3, 3, rng);
  layer.aggregation = CoreAggregation::Rnn;

  Tape tape;
  const Matrix out = layer.forward(tape, decompose(g), Tensor::leaf(x)).aggregated.value();
  Tape tape2;
  const Matrix pout = layer.forward(tape2, decompose(pg), Tensor::leaf(px)).aggregated.value();
  for (Index v = 0; v < n; ++v) {
    CHECK((out.row(v) - pout.row(perm[static_cast<std::size_t>(v)])).norm() < 1e-12);
  }
}

TEST_CASE("model variant defaults resolve per the architecture table") {
  ModelConfig c;
  c.variant = Variant::CtgcnC;
  c.feature_dim = 10;
  c.embedding_dim = 8;
  const ModelConfig rc = c.resolved();
  CHECK(rc.transform_layers == 1);
  CHECK(rc.cgcn_layers == 2);
  CHECK_FALSE(rc.transform_nonlinear);

  ModelConfig s;
  s.variant = Variant::CtgcnS;
  s.feature_dim = 10;
  s.embedding_dim = 8;
  const ModelConfig rs = s.resolved();
  CHECK(rs.transform_layers == 3);
  CHECK(rs.cgcn_layers == 1);
  CHECK(rs.transform_nonlinear);

  Rng rng(71);
  const CtgcnModel mc = CtgcnModel::init(c, rng);
  CHECK(mc.cgcn_stack.size() == 2);
  CHECK(mc.cgcn_stack[0].transform.layers.size() == 1);
  CHECK(mc.cgcn_stack[1].transform.empty());
  CHECK(mc.temporal_cell.has_value());

  const CtgcnModel ms = CtgcnModel::init(s, rng);
  CHECK(ms.cgcn_stack.size() == 1);
  CHECK(ms.cgcn_stack[0].transform.layers.size() == 3);

  ModelConfig simple = c;
  simple.variant = Variant::CtgcnSimple;
  const CtgcnModel msimple = CtgcnModel::init(simple, rng);
  CHECK(msimple.cgcn_stack[0].aggregation == CoreAggregation::Sum);
  CHECK_FALSE(msimple.cgcn_stack[0].core_cell.has_value());
}
