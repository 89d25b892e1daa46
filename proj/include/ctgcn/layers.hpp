#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ctgcn/checkpoint.hpp"
#include "ctgcn/core.hpp"
#include "ctgcn/rng.hpp"
#include "ctgcn/tensor.hpp"

namespace ctgcn {

enum class Activation { Relu, Tanh, Identity };

Tensor apply_activation(Tape& tape, Activation act, const Tensor& x);

// Input to a transform/propagation stage: sparse indicator features at the
// model boundary, dense tensors between layers.
using LayerInput = std::variant<SparseConst, Tensor>;

Tensor to_dense_tensor(const LayerInput& input);
Index input_rows(const LayerInput& input);
Index input_cols(const LayerInput& input);

struct LinearLayer {
  Tensor weight;  // d_in x d_out
  Tensor bias;    // 1 x d_out

  static LinearLayer init(Index d_in, Index d_out, Rng& rng);
  Tensor forward(Tape& tape, const LayerInput& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

// Stacked linear layers with an activation between consecutive layers (none
// after the last). An empty stack acts as the identity. hidden_activation
// Identity gives a multilayer linear transform.
struct MlpTransform {
  std::vector<LinearLayer> layers;
  Activation hidden_activation = Activation::Relu;

  static MlpTransform init(const std::vector<Index>& dims, Activation hidden_activation,
                           Rng& rng);
  bool empty() const { return layers.empty(); }
  Tensor forward(Tape& tape, const LayerInput& x) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

enum class CellKind { Gru, Lstm };

struct RecurrentState {
  Tensor hidden;
  Tensor cell;  // LSTM only
};

struct GateParams {
  Tensor w;  // input weights, d_in x d_h
  Tensor u;  // recurrent weights, d_h x d_h
  Tensor b;  // 1 x d_h
};

// Row-parallel recurrent cell: one state row per node.
//
// GRU (update gate z, reset gate r, candidate c):
//   z = sigmoid(xWz + hUz + bz), r = sigmoid(xWr + hUr + br)
//   c = tanh(xWc + (r . h)Uc + bc)
//   h' = (1 - z) . h + z . c          (z = 0 keeps the previous state)
// LSTM: standard gates i, f, g, o with cell state.
struct RecurrentCell {
  CellKind kind = CellKind::Gru;
  Index input_dim = 0;
  Index hidden_dim = 0;
  std::vector<GateParams> gates;  // GRU: z, r, c; LSTM: i, f, g, o

  static RecurrentCell init(CellKind kind, Index input_dim, Index hidden_dim, Rng& rng);
  RecurrentState zero_state(Index rows) const;
  RecurrentState step(Tape& tape, const Tensor& input, const RecurrentState& prev) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

enum class CoreAggregation { Rnn, Sum };

// Core-based graph convolution: shared feature transform, propagation over
// the nested core chain (densest core first, incrementally via the delta
// matrices), recurrent or sum aggregation of the per-core results.
struct CgcnLayer {
  MlpTransform transform;                    // empty = identity
  std::optional<RecurrentCell> core_cell;    // present in Rnn mode
  CoreAggregation aggregation = CoreAggregation::Rnn;
  Activation propagation_activation = Activation::Relu;
  int max_cores = 0;       // <= 0 -> use all k_max + 1 core subgraphs
  bool row_normalize = false;

  struct Output {
    Tensor aggregated;   // layer output
    Tensor transformed;  // f(X), shared across cores
  };
  Output forward(Tape& tape, const CoreDecomposition& decomposition,
                 const LayerInput& input) const;
  void collect(const std::string& prefix, std::vector<NamedParam>& out) const;
};

// Symmetric-normalized adjacency with self-loops for the vanilla GCN:
// D^{-1/2} (A + I) D^{-1/2}.
SparseConst gcn_normalized_adjacency(const SnapshotGraph& g);

// One vanilla GCN layer: relu(A_hat (X W) + b).
Tensor gcn_layer_forward(Tape& tape, const SparseConst& a_hat, const LayerInput& x,
                         const LinearLayer& layer);

}  // namespace ctgcn
