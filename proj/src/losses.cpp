#include "ctgcn/losses.hpp"

#include <stdexcept>

#include "ctgcn/errors.hpp"

namespace ctgcn {

namespace {

// P x n matrix whose row p selects node ids[p].
SparseConst selection_matrix(const std::vector<Index>& ids, Index n) {
  std::vector<Triplet> triplets;
  triplets.reserve(ids.size());
  for (std::size_t p = 0; p < ids.size(); ++p) {
    triplets.emplace_back(static_cast<Index>(p), ids[p], 1.0);
  }
  SparseMatrix m(static_cast<Index>(ids.size()), n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseConst(std::move(m));
}

}  // namespace

std::vector<Index> draw_negatives(const NegativeSampler& sampler, std::size_t pair_count,
                                  Rng& rng) {
  std::vector<Index> out;
  out.reserve(pair_count * static_cast<std::size_t>(sampler.per_positive()));
  for (std::size_t p = 0; p < pair_count; ++p) {
    for (int q = 0; q < sampler.per_positive(); ++q) out.push_back(sampler.sample(rng));
  }
  return out;
}

Tensor connective_loss(Tape& tape, const std::vector<Tensor>& embeddings,
                       const std::vector<PairSet>& pairs,
                       const std::vector<std::vector<Index>>& negatives, int per_positive_q) {
  if (embeddings.size() != pairs.size() || embeddings.size() != negatives.size()) {
    throw std::logic_error("connective_loss: per-timestamp inputs misaligned");
  }
  Tensor total;
  for (std::size_t t = 0; t < embeddings.size(); ++t) {
    const auto& pair_set = pairs[t].pairs;
    if (pair_set.empty()) continue;
    const Tensor& h = embeddings[t];
    const Index n = h.rows();

    std::vector<Index> anchors, contexts;
    anchors.reserve(pair_set.size());
    contexts.reserve(pair_set.size());
    for (const auto& [u, v] : pair_set) {
      anchors.push_back(u);
      contexts.push_back(v);
    }
    const Tensor h_anchor = tape.spmm(selection_matrix(anchors, n), h);
    const Tensor h_context = tape.spmm(selection_matrix(contexts, n), h);
    Tensor term = tape.sum_all(tape.neg_log_sigmoid(tape.row_dot(h_anchor, h_context)));

    if (per_positive_q > 0) {
      const auto& negs = negatives[t];
      if (negs.size() != pair_set.size() * static_cast<std::size_t>(per_positive_q)) {
        throw std::logic_error("connective_loss: timestamp " + std::to_string(t) + " expects " +
                               std::to_string(pair_set.size() * per_positive_q) +
                               " negatives, got " + std::to_string(negs.size()));
      }
      std::vector<Index> anchor_rep;
      anchor_rep.reserve(negs.size());
      for (std::size_t p = 0; p < pair_set.size(); ++p) {
        for (int q = 0; q < per_positive_q; ++q) anchor_rep.push_back(pair_set[p].first);
      }
      const Tensor h_anchor_rep = tape.spmm(selection_matrix(anchor_rep, n), h);
      const Tensor h_negative = tape.spmm(selection_matrix(negs, n), h);
      const Tensor neg_term = tape.sum_all(
          tape.neg_log_one_minus_sigmoid(tape.row_dot(h_anchor_rep, h_negative)));
      term = tape.add(term, neg_term);
    }
    total = total.defined() ? tape.add(total, term) : term;
  }
  if (!total.defined()) {
    throw TrainingError("connective loss: no co-occurrence pairs at any timestamp");
  }
  return total;
}

Tensor structural_loss(Tape& tape, const std::vector<Tensor>& transform_outputs,
                       const std::vector<Tensor>& aggregate_outputs, bool stop_gradient_on_h) {
  if (transform_outputs.size() != aggregate_outputs.size() || transform_outputs.empty()) {
    throw std::logic_error("structural_loss: per-timestamp outputs misaligned or empty");
  }
  Tensor total;
  for (std::size_t t = 0; t < transform_outputs.size(); ++t) {
    const Tensor& z = transform_outputs[t];
    Tensor h = aggregate_outputs[t];
    if (z.rows() != h.rows() || z.cols() != h.cols()) {
      throw std::logic_error("structural_loss: Z and H shapes differ at t=" + std::to_string(t));
    }
    if (stop_gradient_on_h) h = h.detach();
    const Tensor term = tape.frobenius_sq(tape.sub(z, h));
    total = total.defined() ? tape.add(total, term) : term;
  }
  return total;
}

}  // namespace ctgcn
