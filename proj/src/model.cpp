#include "ctgcn/model.hpp"

#include <stdexcept>

namespace ctgcn {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::CtgcnC: return "ctgcn_c";
    case Variant::CtgcnS: return "ctgcn_s";
    case Variant::CgcnC: return "cgcn_c";
    case Variant::CgcnS: return "cgcn_s";
    case Variant::CtgcnSimple: return "ctgcn_simple";
    case Variant::GcnBaseline: return "gcn_baseline";
  }
  return "?";
}

std::optional<Variant> parse_variant(const std::string& name) {
  for (Variant v : {Variant::CtgcnC, Variant::CtgcnS, Variant::CgcnC, Variant::CgcnS,
                    Variant::CtgcnSimple, Variant::GcnBaseline}) {
    if (variant_name(v) == name) return v;
  }
  return std::nullopt;
}

bool variant_is_dynamic(Variant v) {
  return v == Variant::CtgcnC || v == Variant::CtgcnS || v == Variant::CtgcnSimple;
}

bool variant_uses_connective(Variant v) {
  return v != Variant::CtgcnS && v != Variant::CgcnS;
}

bool variant_embeds_transform(Variant v) {
  return v == Variant::CtgcnS || v == Variant::CgcnS;
}

ModelConfig ModelConfig::resolved() const {
  ModelConfig r = *this;
  if (r.feature_dim <= 0) throw std::invalid_argument("model: feature_dim must be positive");
  if (r.embedding_dim <= 0) throw std::invalid_argument("model: embedding_dim must be positive");
  const bool structural = variant_embeds_transform(r.variant);
  if (r.transform_layers <= 0) r.transform_layers = structural ? 3 : 1;
  if (r.cgcn_layers <= 0) r.cgcn_layers = structural ? 1 : 2;
  if (!r.transform_nonlinear_set) r.transform_nonlinear = structural;
  return r;
}

SnapshotContext make_snapshot_context(Variant v, const SnapshotGraph& g) {
  SnapshotContext ctx;
  if (v == Variant::GcnBaseline) {
    ctx.normalized_adjacency = gcn_normalized_adjacency(g);
  } else {
    ctx.decomposition = decompose(g);
  }
  return ctx;
}

CtgcnModel CtgcnModel::init(const ModelConfig& raw, Rng& rng) {
  CtgcnModel model;
  model.config = raw.resolved();
  const ModelConfig& cfg = model.config;
  const Index d = cfg.embedding_dim;

  if (cfg.variant == Variant::GcnBaseline) {
    Index in = cfg.feature_dim;
    for (int l = 0; l < cfg.cgcn_layers; ++l) {
      model.gcn_layers.push_back(LinearLayer::init(in, d, rng));
      in = d;
    }
    return model;
  }

  const CoreAggregation agg =
      cfg.variant == Variant::CtgcnSimple ? CoreAggregation::Sum : CoreAggregation::Rnn;
  for (int l = 0; l < cfg.cgcn_layers; ++l) {
    CgcnLayer layer;
    layer.aggregation = agg;
    layer.propagation_activation = cfg.activation;
    layer.max_cores = cfg.max_cores;
    layer.row_normalize = cfg.row_normalize;
    if (l == 0) {
      std::vector<Index> dims(static_cast<std::size_t>(cfg.transform_layers) + 1, d);
      dims.front() = cfg.feature_dim;
      layer.transform = MlpTransform::init(
          dims, cfg.transform_nonlinear ? cfg.activation : Activation::Identity, rng);
    }
    if (agg == CoreAggregation::Rnn) {
      layer.core_cell = RecurrentCell::init(cfg.recurrent, d, d, rng);
    }
    model.cgcn_stack.push_back(std::move(layer));
  }
  if (variant_is_dynamic(cfg.variant)) {
    model.temporal_cell = RecurrentCell::init(cfg.recurrent, d, d, rng);
  }
  return model;
}

std::vector<NamedParam> CtgcnModel::named_parameters() const {
  std::vector<NamedParam> params;
  for (std::size_t l = 0; l < cgcn_stack.size(); ++l) {
    cgcn_stack[l].collect("cgcn." + std::to_string(l), params);
  }
  for (std::size_t l = 0; l < gcn_layers.size(); ++l) {
    gcn_layers[l].collect("gcn." + std::to_string(l), params);
  }
  if (temporal_cell) temporal_cell->collect("temporal", params);
  return params;
}

std::vector<Tensor> CtgcnModel::parameters() const {
  std::vector<Tensor> out;
  for (const auto& [name, tensor] : named_parameters()) out.push_back(tensor);
  return out;
}

CtgcnModel::SnapshotOut CtgcnModel::snapshot_forward(Tape& tape, const SnapshotContext& ctx,
                                                     const LayerInput& features) const {
  if (config.variant == Variant::GcnBaseline) {
    LayerInput h = features;
    for (const LinearLayer& layer : gcn_layers) {
      h = gcn_layer_forward(tape, ctx.normalized_adjacency, h, layer);
    }
    Tensor out = std::get<Tensor>(h);
    return {out, out};
  }
  Tensor transformed;
  LayerInput h = features;
  for (std::size_t l = 0; l < cgcn_stack.size(); ++l) {
    CgcnLayer::Output out = cgcn_stack[l].forward(tape, ctx.decomposition, h);
    if (l == 0) transformed = out.transformed;
    h = out.aggregated;
  }
  return {std::get<Tensor>(h), transformed};
}

Tensor CtgcnModel::transform_forward(Tape& tape, const LayerInput& features) const {
  if (cgcn_stack.empty()) {
    throw std::logic_error("transform_forward: model has no transform network");
  }
  return cgcn_stack.front().transform.forward(tape, features);
}

ForwardOutput ctgcn_forward(Tape& tape, const CtgcnModel& model,
                            const std::vector<SnapshotContext>& contexts,
                            const std::vector<LayerInput>& features) {
  if (contexts.size() != features.size()) {
    throw std::logic_error("ctgcn_forward: " + std::to_string(contexts.size()) +
                           " contexts vs " + std::to_string(features.size()) + " feature sets");
  }
  if (contexts.empty()) throw std::logic_error("ctgcn_forward: empty snapshot sequence");

  ForwardOutput out;
  if (model.temporal_cell) {
    RecurrentState state = model.temporal_cell->zero_state(input_rows(features.front()));
    for (std::size_t t = 0; t < contexts.size(); ++t) {
      auto snap = model.snapshot_forward(tape, contexts[t], features[t]);
      state = model.temporal_cell->step(tape, snap.aggregated, state);
      out.h_outputs.push_back(state.hidden);
      out.z_outputs.push_back(snap.transformed);
    }
  } else {
    for (std::size_t t = 0; t < contexts.size(); ++t) {
      auto snap = model.snapshot_forward(tape, contexts[t], features[t]);
      out.h_outputs.push_back(snap.aggregated);
      out.z_outputs.push_back(snap.transformed);
    }
  }
  return out;
}

}  // namespace ctgcn
