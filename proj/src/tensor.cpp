#include "ctgcn/tensor.hpp"

#include <cmath>
#include <utility>

#include "ctgcn/errors.hpp"

namespace ctgcn {

namespace {

void check_finite(const Matrix& m, const char* op) {
  if (!m.allFinite()) {
    throw NumericError(std::string("non-finite values produced by ") + op);
  }
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
  }
}

Matrix stable_sigmoid(const Matrix& x) {
  return x.unaryExpr([](Real v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const Real e = std::exp(v);
    return e / (1.0 + e);
  });
}

}  // namespace

Tensor Tensor::leaf(Matrix value, bool requires_grad) {
  if (!value.allFinite()) throw NumericError("tensor created with non-finite values");
  auto node = std::make_shared<detail::TensorNode>();
  node->value = std::move(value);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::zeros(Index rows, Index cols, bool requires_grad) {
  return leaf(Matrix::Zero(rows, cols), requires_grad);
}

Tensor Tensor::ones(Index rows, Index cols) { return leaf(Matrix::Ones(rows, cols)); }

Tensor Tensor::scalar(Real value) { return leaf(Matrix::Constant(1, 1, value)); }

Matrix Tensor::grad() const {
  if (node_->grad.size() == 0) return Matrix::Zero(rows(), cols());
  return node_->grad;
}

void zero_grad(const std::vector<Tensor>& params) {
  for (const Tensor& p : params) {
    p.node_->grad = Matrix::Zero(p.rows(), p.cols());
  }
}

SparseConst SparseConst::identity(Index n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return SparseConst(std::move(m));
}

Tensor Tape::make_output(Matrix value, bool requires_grad, const char* op) {
  check_finite(value, op);
  auto node = std::make_shared<detail::TensorNode>();
  node->value = std::move(value);
  node->requires_grad = requires_grad;
  node->producer = this;
  return Tensor(std::move(node));
}

void Tape::record(std::function<void()> backprop) { records_.push_back(std::move(backprop)); }

void Tape::touch(const Node& node) {
  if (node->requires_grad) touched_.push_back(node);
}

void Tape::accumulate(const Node& node, const Matrix& delta) {
  if (!node->requires_grad) return;
  if (node->grad.size() == 0) node->grad = Matrix::Zero(node->value.rows(), node->value.cols());
  node->grad += delta;
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.rows() != 1 || loss.cols() != 1) {
    throw std::logic_error("backward: loss must be a 1x1 tensor");
  }
  if (loss.node_->producer != this) {
    throw std::logic_error("backward: loss was not produced by this tape");
  }
  for (const Node& node : touched_) {
    node->grad = Matrix::Zero(node->value.rows(), node->value.cols());
  }
  loss.node_->grad = Matrix::Constant(1, 1, 1.0);
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) (*it)();
}

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions " + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()));
  }
  Tensor out = make_output(a.value() * b.value(), a.requires_grad() || b.requires_grad(), "matmul");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(b.node_);
    touch(out.node_);
    record([an = a.node_, bn = b.node_, on = out.node_] {
      if (an->requires_grad) accumulate(an, on->grad * bn->value.transpose());
      if (bn->requires_grad) accumulate(bn, an->value.transpose() * on->grad);
    });
  }
  return out;
}

Tensor Tape::spmm(const SparseConst& s, const Tensor& d) {
  if (s.cols() != d.rows()) {
    throw std::invalid_argument("spmm: inner dimensions " + std::to_string(s.cols()) + " vs " +
                                std::to_string(d.rows()));
  }
  Tensor out = make_output(s.matrix() * d.value(), d.requires_grad(), "spmm");
  if (out.requires_grad()) {
    touch(d.node_);
    touch(out.node_);
    record([s, dn = d.node_, on = out.node_] {
      accumulate(dn, s.matrix().transpose() * on->grad);
    });
  }
  return out;
}

Tensor Tape::add(const Tensor& a, const Tensor& b) {
  const bool broadcast = b.rows() == 1 && a.cols() == b.cols() && a.rows() != 1;
  if (!broadcast) check_same_shape(a, b, "add");
  Matrix value = broadcast ? Matrix(a.value().rowwise() + RowVector(b.value().row(0)))
                           : Matrix(a.value() + b.value());
  Tensor out = make_output(std::move(value), a.requires_grad() || b.requires_grad(), "add");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(b.node_);
    touch(out.node_);
    record([an = a.node_, bn = b.node_, on = out.node_, broadcast] {
      if (an->requires_grad) accumulate(an, on->grad);
      if (bn->requires_grad) {
        accumulate(bn, broadcast ? Matrix(on->grad.colwise().sum()) : on->grad);
      }
    });
  }
  return out;
}

Tensor Tape::sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  Tensor out = make_output(a.value() - b.value(), a.requires_grad() || b.requires_grad(), "sub");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(b.node_);
    touch(out.node_);
    record([an = a.node_, bn = b.node_, on = out.node_] {
      if (an->requires_grad) accumulate(an, on->grad);
      if (bn->requires_grad) accumulate(bn, -on->grad);
    });
  }
  return out;
}

Tensor Tape::hadamard(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "hadamard");
  Tensor out = make_output(a.value().cwiseProduct(b.value()),
                           a.requires_grad() || b.requires_grad(), "hadamard");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(b.node_);
    touch(out.node_);
    record([an = a.node_, bn = b.node_, on = out.node_] {
      if (an->requires_grad) accumulate(an, on->grad.cwiseProduct(bn->value));
      if (bn->requires_grad) accumulate(bn, on->grad.cwiseProduct(an->value));
    });
  }
  return out;
}

Tensor Tape::negate(const Tensor& a) {
  Tensor out = make_output(-a.value(), a.requires_grad(), "negate");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(out.node_);
    record([an = a.node_, on = out.node_] { accumulate(an, -on->grad); });
  }
  return out;
}

Tensor Tape::sigmoid(const Tensor& a) {
  Tensor out = make_output(stable_sigmoid(a.value()), a.requires_grad(), "sigmoid");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(out.node_);
    record([an = a.node_, on = out.node_] {
      accumulate(an, on->grad.cwiseProduct(
                         on->value.cwiseProduct(Matrix::Ones(on->value.rows(), on->value.cols()) -
                                                on->value)));
    });
  }
  return out;
}

Tensor Tape::tanh(const Tensor& a) {
  Tensor out = make_output(a.value().array().tanh().matrix(), a.requires_grad(), "tanh");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(out.node_);
    record([an = a.node_, on = out.node_] {
      accumulate(an, on->grad.cwiseProduct(
                         (1.0 - on->value.array().square()).matrix()));
    });
  }
  return out;
}

Tensor Tape::relu(const Tensor& a) {
  Tensor out = make_output(a.value().cwiseMax(0.0), a.requires_grad(), "relu");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(out.node_);
    record([an = a.node_, on = out.node_] {
      accumulate(an, on->grad.cwiseProduct(
                         (an->value.array() > 0.0).cast<Real>().matrix()));
    });
  }
  return out;
}

Tensor Tape::neg_log_sigmoid(const Tensor& a) {
  Matrix p = stable_sigmoid(a.value()).cwiseMax(kProbClamp).cwiseMin(1.0 - kProbClamp);
  Tensor out = make_output((-p.array().log()).matrix(), a.requires_grad(), "neg_log_sigmoid");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(out.node_);
    record([an = a.node_, on = out.node_] {
      Matrix p = stable_sigmoid(an->value);
      Matrix mask = ((p.array() > kProbClamp) && (p.array() < 1.0 - kProbClamp)).cast<Real>();
      // d/dx -log sigmoid(x) = sigmoid(x) - 1
      accumulate(an, on->grad.cwiseProduct(((p.array() - 1.0) * mask.array()).matrix()));
    });
  }
  return out;
}

Tensor Tape::neg_log_one_minus_sigmoid(const Tensor& a) {
  Matrix p = stable_sigmoid(a.value()).cwiseMax(kProbClamp).cwiseMin(1.0 - kProbClamp);
  Tensor out = make_output((-(1.0 - p.array()).log()).matrix(), a.requires_grad(),
                           "neg_log_one_minus_sigmoid");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(out.node_);
    record([an = a.node_, on = out.node_] {
      Matrix p = stable_sigmoid(an->value);
      Matrix mask = ((p.array() > kProbClamp) && (p.array() < 1.0 - kProbClamp)).cast<Real>();
      // d/dx -log(1 - sigmoid(x)) = sigmoid(x)
      accumulate(an, on->grad.cwiseProduct((p.array() * mask.array()).matrix()));
    });
  }
  return out;
}

Tensor Tape::sum_all(const Tensor& a) {
  Tensor out = make_output(Matrix::Constant(1, 1, a.value().sum()), a.requires_grad(), "sum_all");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(out.node_);
    record([an = a.node_, on = out.node_] {
      accumulate(an, Matrix::Constant(an->value.rows(), an->value.cols(), on->grad(0, 0)));
    });
  }
  return out;
}

Tensor Tape::frobenius_sq(const Tensor& a) {
  Tensor out = make_output(Matrix::Constant(1, 1, a.value().squaredNorm()), a.requires_grad(),
                           "frobenius_sq");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(out.node_);
    record([an = a.node_, on = out.node_] {
      accumulate(an, 2.0 * on->grad(0, 0) * an->value);
    });
  }
  return out;
}

Tensor Tape::row_dot(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "row_dot");
  Matrix value = a.value().cwiseProduct(b.value()).rowwise().sum();
  Tensor out = make_output(std::move(value), a.requires_grad() || b.requires_grad(), "row_dot");
  if (out.requires_grad()) {
    touch(a.node_);
    touch(b.node_);
    touch(out.node_);
    record([an = a.node_, bn = b.node_, on = out.node_] {
      const auto scale = on->grad.col(0).asDiagonal();
      if (an->requires_grad) accumulate(an, scale * bn->value);
      if (bn->requires_grad) accumulate(bn, scale * an->value);
    });
  }
  return out;
}

}  // namespace ctgcn
