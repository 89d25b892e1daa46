#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ctgcn/types.hpp"

namespace ctgcn {

class Tape;

namespace detail {
struct TensorNode {
  Matrix value;
  Matrix grad;  // sized on first backward touch
  bool requires_grad = false;
  const Tape* producer = nullptr;  // tape that recorded this node, if any
};
}  // namespace detail

// Dense 2-D tensor handle with shared storage. Values are validated finite at
// creation and after every operation; gradients materialize during backward.
class Tensor {
 public:
  Tensor() = default;

  static Tensor leaf(Matrix value, bool requires_grad = false);
  static Tensor zeros(Index rows, Index cols, bool requires_grad = false);
  static Tensor ones(Index rows, Index cols);
  static Tensor scalar(Real value);

  bool defined() const { return node_ != nullptr; }
  Index rows() const { return node_->value.rows(); }
  Index cols() const { return node_->value.cols(); }
  const Matrix& value() const { return node_->value; }
  // Storage is shared between handles; in-place updates (optimizer steps,
  // checkpoint loads) go through this accessor.
  Matrix& mutable_value() const { return node_->value; }
  bool requires_grad() const { return node_->requires_grad; }

  // Gradient after backward(); zeros if the tensor never joined a tape.
  Matrix grad() const;

  // Same underlying storage (handle identity, not value equality).
  bool same_as(const Tensor& other) const { return node_ == other.node_; }

  // A non-differentiable copy of the current value.
  Tensor detach() const { return leaf(node_->value, false); }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorNode> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::TensorNode> node_;
  friend class Tape;
  friend void zero_grad(const std::vector<Tensor>& params);
};

// CSR matrix acting as a differentiation constant: gradients never flow into
// it, only through it (via its transpose).
class SparseConst {
 public:
  SparseConst() = default;
  explicit SparseConst(SparseMatrix m) : m_(std::make_shared<SparseMatrix>(std::move(m))) {
    m_->makeCompressed();
  }
  static SparseConst identity(Index n);
  const SparseMatrix& matrix() const { return *m_; }
  Index rows() const { return m_->rows(); }
  Index cols() const { return m_->cols(); }
  bool defined() const { return m_ != nullptr; }

 private:
  std::shared_ptr<SparseMatrix> m_;
};

// Append-only record of one forward pass. Operations push backward closures;
// backward() replays them in reverse append order exactly once.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Accumulates dL/dx on every requires_grad tensor reachable from loss.
  // Grads of tensors touched by this tape are zeroed first, so unused
  // parameters read as zero. loss must be a 1x1 output of this tape.
  void backward(const Tensor& loss);

  std::size_t size() const { return records_.size(); }

  // --- operations ---
  Tensor matmul(const Tensor& a, const Tensor& b);
  Tensor spmm(const SparseConst& s, const Tensor& d);

  // b may be 1 x a.cols() (row-vector bias broadcast).
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor sub(const Tensor& a, const Tensor& b);
  Tensor hadamard(const Tensor& a, const Tensor& b);

  Tensor negate(const Tensor& a);
  Tensor sigmoid(const Tensor& a);
  Tensor tanh(const Tensor& a);
  Tensor relu(const Tensor& a);

  // -log(p) with p = sigma(x) clamped to [1e-7, 1 - 1e-7]; clamped entries
  // contribute zero gradient.
  Tensor neg_log_sigmoid(const Tensor& a);
  Tensor neg_log_one_minus_sigmoid(const Tensor& a);

  Tensor sum_all(const Tensor& a);       // 1x1
  Tensor frobenius_sq(const Tensor& a);  // 1x1, sum of squared entries
  Tensor row_dot(const Tensor& a, const Tensor& b);  // per-row inner products, n x 1

 private:
  using Node = std::shared_ptr<detail::TensorNode>;

  Tensor make_output(Matrix value, bool requires_grad, const char* op);
  void record(std::function<void()> backprop);
  void touch(const Node& node);
  static void accumulate(const Node& node, const Matrix& delta);

  std::vector<std::function<void()>> records_;
  std::vector<Node> touched_;
};

// Resets accumulated gradients to zero. backward() already zeroes every
// tensor on its own tape; call this over the full parameter list first when
// a loss may not reach all of them, so stale gradients from earlier tapes
// cannot leak into an update.
void zero_grad(const std::vector<Tensor>& params);

// Tolerated sigmoid-clamp window for the log losses.
inline constexpr Real kProbClamp = 1e-7;

}  // namespace ctgcn
