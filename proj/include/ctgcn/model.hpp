#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctgcn/layers.hpp"

namespace ctgcn {

enum class Variant { CtgcnC, CtgcnS, CgcnC, CgcnS, CtgcnSimple, GcnBaseline };

std::string variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string& name);

// ctgcn_* variants thread a temporal recurrent cell across snapshots;
// cgcn_* and the GCN baseline are static and retrain per snapshot.
bool variant_is_dynamic(Variant v);
// C-side variants (and the baseline) train the random-walk proximity loss;
// S-side variants train the transform-vs-aggregate reconstruction loss.
bool variant_uses_connective(Variant v);
// S-side variants export the transform outputs Z as final embeddings.
bool variant_embeds_transform(Variant v);

struct ModelConfig {
  Variant variant = Variant::CtgcnC;
  Index feature_dim = 0;
  Index embedding_dim = 128;
  int transform_layers = 0;  // 0 -> variant default (C: 1, S: 3)
  int cgcn_layers = 0;       // 0 -> variant default (C: 2, S: 1, baseline: 2)
  bool transform_nonlinear = false;  // resolved from variant when defaulted
  bool transform_nonlinear_set = false;
  CellKind recurrent = CellKind::Gru;
  Activation activation = Activation::Relu;
  int max_cores = 0;  // <= 0 -> all core subgraphs
  bool row_normalize = false;

  // Fills variant-dependent defaults; validates the rest.
  ModelConfig resolved() const;
};

// Per-snapshot propagation context prepared once before training.
struct SnapshotContext {
  CoreDecomposition decomposition;   // CGCN variants
  SparseConst normalized_adjacency;  // GCN baseline
};

SnapshotContext make_snapshot_context(Variant v, const SnapshotGraph& g);

struct CtgcnModel {
  ModelConfig config;
  std::vector<CgcnLayer> cgcn_stack;    // CGCN variants; transform lives on the first layer
  std::vector<LinearLayer> gcn_layers;  // GCN baseline
  std::optional<RecurrentCell> temporal_cell;

  static CtgcnModel init(const ModelConfig& config, Rng& rng);

  std::vector<NamedParam> named_parameters() const;
  std::vector<Tensor> parameters() const;

  struct SnapshotOut {
    Tensor aggregated;   // CGCN-stack (or GCN) output for one snapshot
    Tensor transformed;  // first transform output Z
  };
  SnapshotOut snapshot_forward(Tape& tape, const SnapshotContext& ctx,
                               const LayerInput& features) const;

  // Transform network alone; never touches an adjacency.
  Tensor transform_forward(Tape& tape, const LayerInput& features) const;
};

struct ForwardOutput {
  std::vector<Tensor> h_outputs;  // per snapshot: temporal outputs (dynamic) or
                                  // per-snapshot aggregated outputs (static)
  std::vector<Tensor> z_outputs;  // per snapshot: transform outputs
};

// Full forward over the snapshot sequence. Dynamic variants thread
// H(t) = RNN(CGCN(A(t), X(t)), H(t-1)) with H(0) = 0; CGCN parameters are
// shared across timestamps.
ForwardOutput ctgcn_forward(Tape& tape, const CtgcnModel& model,
                            const std::vector<SnapshotContext>& contexts,
                            const std::vector<LayerInput>& features);

}  // namespace ctgcn
