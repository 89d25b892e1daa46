#pragma once

#include <vector>

#include "ctgcn/tensor.hpp"
#include "ctgcn/walks.hpp"

namespace ctgcn {

// Q negatives per positive pair, in pair order: negatives[p * Q + q].
std::vector<Index> draw_negatives(const NegativeSampler& sampler, std::size_t pair_count,
                                  Rng& rng);

// Connective-proximity objective over all timestamps:
//   sum_t sum_pairs [ -log sigma(<h_u, h_v>) ] + sum_draws [ -log(1 - sigma(<h_u, h_v'>)) ]
// where the Q-draw sum realizes the Q-weighted negative expectation.
// Differentiable through the embeddings; throws TrainingError when no
// timestamp contributes a pair.
Tensor connective_loss(Tape& tape, const std::vector<Tensor>& embeddings,
                       const std::vector<PairSet>& pairs,
                       const std::vector<std::vector<Index>>& negatives, int per_positive_q);

// Structural-similarity objective: sum_t ||Z(t) - H(t)||_F^2. Gradients flow
// into both branches unless stop_gradient_on_h freezes the aggregation side.
Tensor structural_loss(Tape& tape, const std::vector<Tensor>& transform_outputs,
                       const std::vector<Tensor>& aggregate_outputs,
                       bool stop_gradient_on_h = false);

}  // namespace ctgcn
