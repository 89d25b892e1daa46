#include "ctgcn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace ctgcn {

AdamState AdamState::for_params(const std::vector<Tensor>& params, double learning_rate,
                                double weight_decay) {
  AdamState state;
  state.learning_rate = learning_rate;
  state.weight_decay = weight_decay;
  state.slots.reserve(params.size());
  for (const Tensor& p : params) {
    state.slots.push_back({Matrix::Zero(p.rows(), p.cols()), Matrix::Zero(p.rows(), p.cols())});
  }
  return state;
}

void adam_step(AdamState& state, const std::vector<Tensor>& params) {
  if (state.slots.size() != params.size()) {
    throw std::logic_error("adam_step: state tracks " + std::to_string(state.slots.size()) +
                           " parameters, got " + std::to_string(params.size()));
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Tensor& p = params[i];
    auto& slot = state.slots[i];
    if (slot.first_moment.rows() != p.rows() || slot.first_moment.cols() != p.cols()) {
      throw std::logic_error("adam_step: parameter " + std::to_string(i) + " changed shape");
    }
    Matrix g = p.grad();
    if (state.weight_decay != 0.0) g += state.weight_decay * p.value();
    slot.first_moment = state.beta1 * slot.first_moment + (1.0 - state.beta1) * g;
    slot.second_moment =
        state.beta2 * slot.second_moment + (1.0 - state.beta2) * g.cwiseProduct(g);
    const Matrix m_hat = slot.first_moment / bc1;
    const Matrix v_hat = slot.second_moment / bc2;
    p.mutable_value() -=
        state.learning_rate *
        m_hat.cwiseQuotient(v_hat.cwiseSqrt() + Matrix::Constant(p.rows(), p.cols(), state.epsilon));
  }
}

}  // namespace ctgcn
