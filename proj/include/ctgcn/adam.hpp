#pragma once

#include <vector>

#include "ctgcn/tensor.hpp"
#include "ctgcn/types.hpp"

namespace ctgcn {

// Bias-corrected Adam with L2 weight decay folded into the gradient
// (g <- g + weight_decay * theta).
struct AdamState {
  struct Slot {
    Matrix first_moment;
    Matrix second_moment;
  };

  double learning_rate = 1e-3;
  double weight_decay = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  std::vector<Slot> slots;

  static AdamState for_params(const std::vector<Tensor>& params, double learning_rate = 1e-3,
                              double weight_decay = 5e-4);
};

// One update over all parameters; reads each tensor's accumulated gradient.
void adam_step(AdamState& state, const std::vector<Tensor>& params);

}  // namespace ctgcn
