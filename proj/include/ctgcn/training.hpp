#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "ctgcn/features.hpp"
#include "ctgcn/model.hpp"
#include "ctgcn/walks.hpp"

namespace ctgcn {

struct TrainConfig {
  Variant variant = Variant::CtgcnC;
  int epochs = 100;
  Index embedding_dim = 128;
  double learning_rate = 1e-3;
  double weight_decay = 5e-4;
  int max_cores = 0;  // <= 0 -> all core subgraphs
  std::uint64_t seed = 0;

  WalkConfig walk;  // walk.seed is derived from `seed`; the field is ignored
  int negative_q = 5;
  double negative_alpha = 0.75;
  bool resample_walks_per_epoch = false;
  bool stop_gradient_on_h = false;

  Activation activation = Activation::Relu;
  CellKind recurrent = CellKind::Gru;
  int transform_layers = 0;  // 0 -> variant default
  int cgcn_layers = 0;       // 0 -> variant default
  std::optional<bool> transform_nonlinear;
  std::optional<FeatureKind> feature;  // default: one-hot (C side), degree-based (S side)
  bool row_normalize = false;
  int patience = 0;  // early stop after this many non-improving epochs; 0 = off

  void validate() const;
  FeatureKind feature_kind() const;
};

struct EmbeddingSet {
  Variant variant = Variant::CtgcnC;
  std::vector<Matrix> per_snapshot;  // n x d each
};

struct TrainResult {
  // Dynamic variants train one model; static variants retrain per snapshot.
  std::vector<CtgcnModel> models;
  EmbeddingSet embeddings;
  std::vector<double> loss_history;  // per epoch (summed over snapshot models when static)
  int epochs_run = 0;
  double decomposition_seconds = 0.0;
  double training_seconds = 0.0;
  double per_epoch_seconds = 0.0;
};

// Full-batch training under the variant's objective. Deterministic for a
// fixed seed: walks, initialization, negative draws and updates all derive
// from cfg.seed. Aborts with TrainingError on non-finite loss, naming the
// epoch and the operation that produced it.
TrainResult train(const DynamicGraph& dyn, const TrainConfig& cfg);

// One embeddings_t<t>.tsv per snapshot: header `node dim_0 ... dim_{d-1}`,
// node labels in universe order, 17-significant-digit decimals (exact
// round trip).
void export_embeddings(const EmbeddingSet& set, const std::vector<std::int64_t>& node_labels,
                       const std::filesystem::path& dir);

std::vector<Matrix> load_embeddings(const std::filesystem::path& dir, int snapshot_count,
                                    const std::vector<std::int64_t>& node_labels);

}  // namespace ctgcn
