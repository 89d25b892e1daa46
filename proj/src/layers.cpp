#include "ctgcn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctgcn/errors.hpp"

namespace ctgcn {

namespace {

Matrix glorot(Index rows, Index cols, Rng& rng) {
  const Real bound = std::sqrt(6.0 / static_cast<Real>(rows + cols));
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.next_uniform(-bound, bound);
  }
  return m;
}

SparseMatrix row_normalized(const SparseMatrix& m) {
  SparseMatrix out = m;
  for (Index row = 0; row < out.outerSize(); ++row) {
    Real sum = 0.0;
    for (SparseMatrix::InnerIterator it(out, row); it; ++it) sum += it.value();
    if (sum > 0.0) {
      for (SparseMatrix::InnerIterator it(out, row); it; ++it) it.valueRef() /= sum;
    }
  }
  return out;
}

}  // namespace

Tensor apply_activation(Tape& tape, Activation act, const Tensor& x) {
  switch (act) {
    case Activation::Relu:
      return tape.relu(x);
    case Activation::Tanh:
      return tape.tanh(x);
    case Activation::Identity:
      return x;
  }
  throw std::logic_error("unknown activation");
}

Tensor to_dense_tensor(const LayerInput& input) {
  if (const auto* dense = std::get_if<Tensor>(&input)) return *dense;
  return Tensor::leaf(Matrix(std::get<SparseConst>(input).matrix()), false);
}

Index input_rows(const LayerInput& input) {
  if (const auto* dense = std::get_if<Tensor>(&input)) return dense->rows();
  return std::get<SparseConst>(input).rows();
}

Index input_cols(const LayerInput& input) {
  if (const auto* dense = std::get_if<Tensor>(&input)) return dense->cols();
  return std::get<SparseConst>(input).cols();
}

LinearLayer LinearLayer::init(Index d_in, Index d_out, Rng& rng) {
  LinearLayer layer;
  layer.weight = Tensor::leaf(glorot(d_in, d_out, rng), true);
  layer.bias = Tensor::zeros(1, d_out, true);
  return layer;
}

Tensor LinearLayer::forward(Tape& tape, const LayerInput& x) const {
  if (const auto* dense = std::get_if<Tensor>(&x)) {
    return tape.add(tape.matmul(*dense, weight), bias);
  }
  return tape.add(tape.spmm(std::get<SparseConst>(x), weight), bias);
}

void LinearLayer::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

MlpTransform MlpTransform::init(const std::vector<Index>& dims, Activation hidden_activation,
                                Rng& rng) {
  if (dims.size() < 2) throw std::invalid_argument("MlpTransform needs at least one layer");
  MlpTransform mlp;
  mlp.hidden_activation = hidden_activation;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    mlp.layers.push_back(LinearLayer::init(dims[i], dims[i + 1], rng));
  }
  return mlp;
}

Tensor MlpTransform::forward(Tape& tape, const LayerInput& x) const {
  if (layers.empty()) return to_dense_tensor(x);
  Tensor h = layers.front().forward(tape, x);
  for (std::size_t i = 1; i < layers.size(); ++i) {
    h = layers[i].forward(tape, apply_activation(tape, hidden_activation, h));
  }
  return h;
}

void MlpTransform::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].collect(prefix + "." + std::to_string(i), out);
  }
}

RecurrentCell RecurrentCell::init(CellKind kind, Index input_dim, Index hidden_dim, Rng& rng) {
  RecurrentCell cell;
  cell.kind = kind;
  cell.input_dim = input_dim;
  cell.hidden_dim = hidden_dim;
  const std::size_t gate_count = kind == CellKind::Gru ? 3 : 4;
  for (std::size_t g = 0; g < gate_count; ++g) {
    GateParams gate;
    gate.w = Tensor::leaf(glorot(input_dim, hidden_dim, rng), true);
    gate.u = Tensor::leaf(glorot(hidden_dim, hidden_dim, rng), true);
    gate.b = Tensor::zeros(1, hidden_dim, true);
    cell.gates.push_back(std::move(gate));
  }
  return cell;
}

RecurrentState RecurrentCell::zero_state(Index rows) const {
  RecurrentState state;
  state.hidden = Tensor::zeros(rows, hidden_dim);
  if (kind == CellKind::Lstm) state.cell = Tensor::zeros(rows, hidden_dim);
  return state;
}

namespace {
Tensor gate_preact(Tape& tape, const GateParams& g, const Tensor& x, const Tensor& h) {
  return tape.add(tape.add(tape.matmul(x, g.w), tape.matmul(h, g.u)), g.b);
}
}  // namespace

RecurrentState RecurrentCell::step(Tape& tape, const Tensor& input,
                                   const RecurrentState& prev) const {
  if (input.cols() != input_dim || prev.hidden.cols() != hidden_dim ||
      input.rows() != prev.hidden.rows()) {
    throw std::invalid_argument("recurrent step: input " + std::to_string(input.rows()) + "x" +
                                std::to_string(input.cols()) + " incompatible with hidden " +
                                std::to_string(prev.hidden.rows()) + "x" +
                                std::to_string(prev.hidden.cols()));
  }
  RecurrentState next;
  if (kind == CellKind::Gru) {
    const Tensor z = tape.sigmoid(gate_preact(tape, gates[0], input, prev.hidden));
    const Tensor r = tape.sigmoid(gate_preact(tape, gates[1], input, prev.hidden));
    const Tensor gated_prev = tape.hadamard(r, prev.hidden);
    const Tensor candidate = tape.tanh(tape.add(
        tape.add(tape.matmul(input, gates[2].w), tape.matmul(gated_prev, gates[2].u)),
        gates[2].b));
    // h' = h - z.h + z.c
    next.hidden = tape.add(tape.sub(prev.hidden, tape.hadamard(z, prev.hidden)),
                           tape.hadamard(z, candidate));
  } else {
    if (!prev.cell.defined()) {
      throw std::invalid_argument("recurrent step: LSTM state is missing its cell tensor");
    }
    const Tensor i = tape.sigmoid(gate_preact(tape, gates[0], input, prev.hidden));
    const Tensor f = tape.sigmoid(gate_preact(tape, gates[1], input, prev.hidden));
    const Tensor g = tape.tanh(gate_preact(tape, gates[2], input, prev.hidden));
    const Tensor o = tape.sigmoid(gate_preact(tape, gates[3], input, prev.hidden));
    next.cell = tape.add(tape.hadamard(f, prev.cell), tape.hadamard(i, g));
    next.hidden = tape.hadamard(o, tape.tanh(next.cell));
  }
  return next;
}

void RecurrentCell::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  static const char* kGruNames[] = {"update", "reset", "candidate"};
  static const char* kLstmNames[] = {"input", "forget", "cell", "output"};
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const std::string name =
        prefix + "." + (kind == CellKind::Gru ? kGruNames[g] : kLstmNames[g]);
    out.push_back({name + ".w", gates[g].w});
    out.push_back({name + ".u", gates[g].u});
    out.push_back({name + ".b", gates[g].b});
  }
}

CgcnLayer::Output CgcnLayer::forward(Tape& tape, const CoreDecomposition& decomposition,
                                     const LayerInput& input) const {
  const Index n = static_cast<Index>(decomposition.core_number.size());
  if (input_rows(input) != n) {
    throw std::logic_error("cgcn forward: feature rows " + std::to_string(input_rows(input)) +
                           " != decomposition nodes " + std::to_string(n));
  }
  if (!decomposition.has_chain()) {
    throw std::logic_error("cgcn forward: decomposition chain not materialized");
  }
  const Tensor z = transform.forward(tape, input);

  const int total_cores = decomposition.k_max + 1;
  const int used = max_cores <= 0 ? total_cores : std::min(max_cores, total_cores);

  // Propagate densest core first. Without row normalization the chain is
  // evaluated incrementally: A_k Z = A_{k+1} Z + dA_k Z.
  std::vector<Tensor> propagated;
  propagated.reserve(static_cast<std::size_t>(used));
  if (row_normalize) {
    for (int i = 0; i < used; ++i) {
      const int k = decomposition.k_max - i;
      const SparseConst norm(
          row_normalized(decomposition.core_adj[static_cast<std::size_t>(k)]));
      propagated.push_back(apply_activation(tape, propagation_activation, tape.spmm(norm, z)));
    }
  } else {
    Tensor product = tape.spmm(
        SparseConst(decomposition.core_adj[static_cast<std::size_t>(decomposition.k_max)]), z);
    propagated.push_back(apply_activation(tape, propagation_activation, product));
    for (int i = 1; i < used; ++i) {
      const int k = decomposition.k_max - i;
      const SparseMatrix& delta = decomposition.delta_adj[static_cast<std::size_t>(k)];
      if (delta.nonZeros() > 0) {
        product = tape.add(product, tape.spmm(SparseConst(delta), z));
      }
      propagated.push_back(apply_activation(tape, propagation_activation, product));
    }
  }

  Tensor out;
  if (aggregation == CoreAggregation::Rnn) {
    if (!core_cell) throw std::logic_error("cgcn forward: RNN aggregation without a core cell");
    RecurrentState state = core_cell->zero_state(n);
    for (const Tensor& zk : propagated) {
      state = core_cell->step(tape, zk, state);
      out = out.defined() ? tape.add(out, state.hidden) : state.hidden;
    }
  } else {
    for (const Tensor& zk : propagated) {
      out = out.defined() ? tape.add(out, zk) : zk;
    }
  }
  return {out, z};
}

void CgcnLayer::collect(const std::string& prefix, std::vector<NamedParam>& out) const {
  transform.collect(prefix + ".transform", out);
  if (core_cell) core_cell->collect(prefix + ".cell", out);
}

SparseConst gcn_normalized_adjacency(const SnapshotGraph& g) {
  const Index n = g.n;
  SparseMatrix with_loops = g.adjacency;
  SparseMatrix eye(n, n);
  eye.setIdentity();
  with_loops += eye;
  Vector inv_sqrt_deg(n);
  for (Index row = 0; row < n; ++row) {
    Real sum = 0.0;
    for (SparseMatrix::InnerIterator it(with_loops, row); it; ++it) sum += it.value();
    inv_sqrt_deg(row) = 1.0 / std::sqrt(sum);
  }
  for (Index row = 0; row < with_loops.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(with_loops, row); it; ++it) {
      it.valueRef() *= inv_sqrt_deg(row) * inv_sqrt_deg(it.col());
    }
  }
  return SparseConst(std::move(with_loops));
}

Tensor gcn_layer_forward(Tape& tape, const SparseConst& a_hat, const LayerInput& x,
                         const LinearLayer& layer) {
  Tensor xw;
  if (const auto* dense = std::get_if<Tensor>(&x)) {
    xw = tape.matmul(*dense, layer.weight);
  } else {
    xw = tape.spmm(std::get<SparseConst>(x), layer.weight);
  }
  return tape.relu(tape.add(tape.spmm(a_hat, xw), layer.bias));
}

}  // namespace ctgcn
