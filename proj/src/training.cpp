#include "ctgcn/training.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ctgcn/adam.hpp"
#include "ctgcn/errors.hpp"
#include "ctgcn/losses.hpp"

namespace ctgcn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct EpochTracker {
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;

  // true when training should stop
  bool update(double loss, int patience) {
    if (loss < best - 1e-12) {
      best = loss;
      stale = 0;
      return false;
    }
    return patience > 0 && ++stale >= patience;
  }
};

ModelConfig model_config_from(const TrainConfig& cfg, Index feature_dim) {
  ModelConfig mc;
  mc.variant = cfg.variant;
  mc.feature_dim = feature_dim;
  mc.embedding_dim = cfg.embedding_dim;
  mc.transform_layers = cfg.transform_layers;
  mc.cgcn_layers = cfg.cgcn_layers;
  if (cfg.transform_nonlinear) {
    mc.transform_nonlinear = *cfg.transform_nonlinear;
    mc.transform_nonlinear_set = true;
  }
  mc.recurrent = cfg.recurrent;
  mc.activation = cfg.activation;
  mc.max_cores = cfg.max_cores;
  mc.row_normalize = cfg.row_normalize;
  return mc;
}

std::vector<PairSet> sample_all_walks(const DynamicGraph& dyn, const TrainConfig& cfg,
                                      int epoch) {
  std::vector<PairSet> pairs;
  pairs.reserve(dyn.snapshots.size());
  for (std::size_t t = 0; t < dyn.snapshots.size(); ++t) {
    WalkConfig wc = cfg.walk;
    wc.seed = derive_seed(cfg.seed, "walks", static_cast<std::uint64_t>(t));
    if (epoch > 0) wc.seed = derive_seed(wc.seed, "epoch", static_cast<std::uint64_t>(epoch));
    pairs.push_back(sample_walks(dyn.snapshots[t], wc));
  }
  return pairs;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw ValidationError("epochs must be >= 0");
  if (embedding_dim <= 0) throw ValidationError("embedding_dim must be positive");
  if (learning_rate <= 0.0) throw ValidationError("learning_rate must be positive");
  if (weight_decay < 0.0) throw ValidationError("weight_decay must be >= 0");
  if (negative_q < 0) throw ValidationError("negative_q must be >= 0");
  if (patience < 0) throw ValidationError("patience must be >= 0");
  walk.validate();
}

FeatureKind TrainConfig::feature_kind() const {
  if (feature) return *feature;
  return variant_uses_connective(variant) ? FeatureKind::OneHot : FeatureKind::DegreeBased;
}

TrainResult train(const DynamicGraph& dyn, const TrainConfig& cfg) {
  cfg.validate();
  if (dyn.snapshots.empty()) throw ValidationError("training requires at least one snapshot");
  const bool connective = variant_uses_connective(cfg.variant);
  const bool dynamic = variant_is_dynamic(cfg.variant);
  const int T = dyn.snapshot_count();

  TrainResult result;
  result.embeddings.variant = cfg.variant;

  const auto decomposition_start = Clock::now();
  std::vector<SnapshotContext> contexts;
  contexts.reserve(static_cast<std::size_t>(T));
  for (const auto& snap : dyn.snapshots) {
    contexts.push_back(make_snapshot_context(cfg.variant, snap));
  }
  result.decomposition_seconds = seconds_since(decomposition_start);

  const std::vector<SparseConst> feature_mats = build_features(dyn, {cfg.feature_kind()});
  std::vector<LayerInput> features(feature_mats.begin(), feature_mats.end());
  const Index feature_dim = feature_mats.front().cols();

  std::vector<PairSet> pairs;
  std::vector<NegativeSampler> samplers;
  if (connective) {
    pairs = sample_all_walks(dyn, cfg, 0);
    bool any = false;
    for (const auto& p : pairs) any = any || !p.empty();
    if (!any) {
      throw TrainingError("no random-walk co-occurrence pairs in any snapshot; "
                          "cannot optimize the connective objective");
    }
    for (const auto& snap : dyn.snapshots) {
      samplers.push_back(
          NegativeSampler::from_degrees(degree_vector(snap), cfg.negative_alpha, cfg.negative_q));
    }
  }

  const ModelConfig mc = model_config_from(cfg, feature_dim);
  const auto training_start = Clock::now();
  long total_epoch_steps = 0;

  if (dynamic) {
    Rng init_rng(derive_seed(cfg.seed, "init"));
    CtgcnModel model = CtgcnModel::init(mc, init_rng);
    std::vector<Tensor> params = model.parameters();
    AdamState adam = AdamState::for_params(params, cfg.learning_rate, cfg.weight_decay);
    Rng negative_rng(derive_seed(cfg.seed, "negatives"));

    EpochTracker tracker;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      if (connective && cfg.resample_walks_per_epoch && epoch > 0) {
        pairs = sample_all_walks(dyn, cfg, epoch);
      }
      Tape tape;
      double loss_value = 0.0;
      try {
        ForwardOutput out = ctgcn_forward(tape, model, contexts, features);
        Tensor loss;
        if (connective) {
          std::vector<std::vector<Index>> negatives;
          for (std::size_t t = 0; t < pairs.size(); ++t) {
            negatives.push_back(
                draw_negatives(samplers[t], pairs[t].pairs.size(), negative_rng));
          }
          loss = connective_loss(tape, out.h_outputs, pairs, negatives, cfg.negative_q);
        } else {
          loss = structural_loss(tape, out.z_outputs, out.h_outputs, cfg.stop_gradient_on_h);
        }
        loss_value = loss.value()(0, 0);
        zero_grad(params);
        tape.backward(loss);
        adam_step(adam, params);
      } catch (const NumericError& e) {
        throw TrainingError("aborted at epoch " + std::to_string(epoch) + ": " + e.what());
      }
      result.loss_history.push_back(loss_value);
      ++total_epoch_steps;
      result.epochs_run = epoch + 1;
      if (tracker.update(loss_value, cfg.patience)) break;
    }

    Tape tape;
    ForwardOutput out = ctgcn_forward(tape, model, contexts, features);
    const auto& emb_src = variant_embeds_transform(cfg.variant) ? out.z_outputs : out.h_outputs;
    for (const Tensor& e : emb_src) result.embeddings.per_snapshot.push_back(e.value());
    result.models.push_back(std::move(model));
  } else {
    // Static variants: an independent model per snapshot.
    result.loss_history.assign(static_cast<std::size_t>(cfg.epochs), 0.0);
    std::vector<double> last_loss(static_cast<std::size_t>(T), 0.0);
    for (int t = 0; t < T; ++t) {
      Rng init_rng(derive_seed(cfg.seed, "init", static_cast<std::uint64_t>(t)));
      CtgcnModel model = CtgcnModel::init(mc, init_rng);
      std::vector<Tensor> params = model.parameters();
      AdamState adam = AdamState::for_params(params, cfg.learning_rate, cfg.weight_decay);
      Rng negative_rng(derive_seed(cfg.seed, "negatives", static_cast<std::uint64_t>(t)));
      const std::vector<SnapshotContext> ctx_one{contexts[static_cast<std::size_t>(t)]};
      std::vector<LayerInput> feat_one{features[static_cast<std::size_t>(t)]};

      EpochTracker tracker;
      int epochs_this = 0;
      for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (connective && cfg.resample_walks_per_epoch && epoch > 0) {
          WalkConfig wc = cfg.walk;
          wc.seed = derive_seed(derive_seed(cfg.seed, "walks", static_cast<std::uint64_t>(t)),
                                "epoch", static_cast<std::uint64_t>(epoch));
          pairs[static_cast<std::size_t>(t)] =
              sample_walks(dyn.snapshots[static_cast<std::size_t>(t)], wc);
        }
        Tape tape;
        double loss_value = 0.0;
        try {
          ForwardOutput out = ctgcn_forward(tape, model, ctx_one, feat_one);
          Tensor loss;
          if (connective) {
            if (pairs[static_cast<std::size_t>(t)].empty()) break;  // nothing to optimize here
            std::vector<std::vector<Index>> negatives{draw_negatives(
                samplers[static_cast<std::size_t>(t)],
                pairs[static_cast<std::size_t>(t)].pairs.size(), negative_rng)};
            loss = connective_loss(tape, out.h_outputs,
                                   {pairs[static_cast<std::size_t>(t)]}, negatives,
                                   cfg.negative_q);
          } else {
            loss = structural_loss(tape, out.z_outputs, out.h_outputs, cfg.stop_gradient_on_h);
          }
          loss_value = loss.value()(0, 0);
          zero_grad(params);
          tape.backward(loss);
          adam_step(adam, params);
        } catch (const NumericError& e) {
          throw TrainingError("aborted at snapshot " + std::to_string(t) + ", epoch " +
                              std::to_string(epoch) + ": " + e.what());
        }
        last_loss[static_cast<std::size_t>(t)] = loss_value;
        result.loss_history[static_cast<std::size_t>(epoch)] += loss_value;
        ++total_epoch_steps;
        epochs_this = epoch + 1;
        if (tracker.update(loss_value, cfg.patience)) break;
      }
      // A model that stopped early contributes its final loss to later epochs.
      for (int epoch = epochs_this; epoch < cfg.epochs; ++epoch) {
        result.loss_history[static_cast<std::size_t>(epoch)] +=
            last_loss[static_cast<std::size_t>(t)];
      }
      result.epochs_run = std::max(result.epochs_run, epochs_this);

      Tape tape;
      ForwardOutput out = ctgcn_forward(tape, model, ctx_one, feat_one);
      result.embeddings.per_snapshot.push_back(variant_embeds_transform(cfg.variant)
                                                   ? out.z_outputs.front().value()
                                                   : out.h_outputs.front().value());
      result.models.push_back(std::move(model));
    }
    if (result.epochs_run < cfg.epochs) {
      result.loss_history.resize(static_cast<std::size_t>(std::max(result.epochs_run, 0)));
    }
  }

  result.training_seconds = seconds_since(training_start);
  result.per_epoch_seconds =
      total_epoch_steps > 0 ? result.training_seconds / static_cast<double>(total_epoch_steps)
                            : 0.0;
  for (const Matrix& m : result.embeddings.per_snapshot) {
    if (!m.allFinite()) throw TrainingError("final embeddings contain non-finite values");
  }
  return result;
}

void export_embeddings(const EmbeddingSet& set, const std::vector<std::int64_t>& node_labels,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t t = 0; t < set.per_snapshot.size(); ++t) {
    const Matrix& m = set.per_snapshot[t];
    if (static_cast<std::size_t>(m.rows()) != node_labels.size()) {
      throw std::logic_error("export_embeddings: embedding rows != node universe size");
    }
    const std::filesystem::path path = dir / ("embeddings_t" + std::to_string(t) + ".tsv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "node";
    for (Index c = 0; c < m.cols(); ++c) out << "\tdim_" << c;
    out << "\n";
    char buf[40];
    for (Index r = 0; r < m.rows(); ++r) {
      out << node_labels[static_cast<std::size_t>(r)];
      for (Index c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
        out << "\t" << buf;
      }
      out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
}

std::vector<Matrix> load_embeddings(const std::filesystem::path& dir, int snapshot_count,
                                    const std::vector<std::int64_t>& node_labels) {
  std::vector<Matrix> result;
  for (int t = 0; t < snapshot_count; ++t) {
    const std::filesystem::path path = dir / ("embeddings_t" + std::to_string(t) + ".tsv");
    std::ifstream in(path);
    if (!in) {
      throw ValidationError("missing embeddings file: " + path.string() +
                            " (expected embeddings_t<t>.tsv for t in [0, " +
                            std::to_string(snapshot_count) + "))");
    }
    std::string header;
    std::getline(in, header);
    Index dims = 0;
    for (std::size_t pos = header.find('\t'); pos != std::string::npos;
         pos = header.find('\t', pos + 1)) {
      ++dims;
    }
    if (dims <= 0) throw ParseError(path.string() + ": header has no embedding columns");
    Matrix m(static_cast<Index>(node_labels.size()), dims);
    for (std::size_t r = 0; r < node_labels.size(); ++r) {
      std::int64_t label = 0;
      if (!(in >> label) || label != node_labels[r]) {
        throw ParseError(path.string() + ": row " + std::to_string(r + 1) +
                         " does not match node universe order");
      }
      for (Index c = 0; c < dims; ++c) {
        if (!(in >> m(static_cast<Index>(r), c))) {
          throw ParseError(path.string() + ": truncated embedding row for node " +
                           std::to_string(label));
        }
      }
    }
    result.push_back(std::move(m));
  }
  return result;
}

}  // namespace ctgcn
