#include "ctgcn/linear_models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ctgcn/errors.hpp"

namespace ctgcn {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 30.0) return x;
  return std::log1p(std::exp(x));
}

// Mean logistic loss plus (l2/2)||w||^2.
double logistic_objective(const Matrix& x, const std::vector<int>& y, const Vector& w, double b,
                          double l2) {
  const double m = static_cast<double>(x.rows());
  double loss = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    const double z = x.row(i).dot(w) + b;
    loss += softplus(z) - (y[static_cast<std::size_t>(i)] ? z : 0.0);
  }
  return loss / m + 0.5 * l2 * w.squaredNorm();
}

}  // namespace

double LinearClassifier::decision(const Eigen::Ref<const Vector>& x) const {
  return weights.dot(x) + bias;
}

double LinearClassifier::probability(const Eigen::Ref<const Vector>& x) const {
  return stable_sigmoid(decision(x));
}

std::vector<double> LinearClassifier::decision_values(const Matrix& features) const {
  std::vector<double> out(static_cast<std::size_t>(features.rows()));
  for (Index i = 0; i < features.rows(); ++i) out[static_cast<std::size_t>(i)] = decision(features.row(i));
  return out;
}

LinearClassifier fit_logistic(const Matrix& features, const std::vector<int>& labels,
                              const LogisticConfig& cfg) {
  if (static_cast<std::size_t>(features.rows()) != labels.size() || labels.empty()) {
    throw ValidationError("fit_logistic: features and labels must align and be non-empty");
  }
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1) throw ValidationError("fit_logistic: labels must be 0/1");
    (y ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw ValidationError("fit_logistic: need at least one example of each class");
  }

  const Index d = features.cols();
  const double m = static_cast<double>(features.rows());
  Vector w = Vector::Zero(d);
  double b = 0.0;
  double objective = logistic_objective(features, labels, w, b, cfg.l2);

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    Vector grad_w = Vector::Zero(d);
    double grad_b = 0.0;
    for (Index i = 0; i < features.rows(); ++i) {
      const double err = stable_sigmoid(features.row(i).dot(w) + b) -
                         static_cast<double>(labels[static_cast<std::size_t>(i)]);
      grad_w += err * features.row(i).transpose();
      grad_b += err;
    }
    grad_w = grad_w / m + cfg.l2 * w;
    grad_b /= m;

    const double grad_norm = std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
    if (grad_norm <= cfg.gradient_tolerance) break;

    // Backtracking Armijo search.
    double step = 1.0;
    const double slope = grad_w.squaredNorm() + grad_b * grad_b;
    bool moved = false;
    for (int half = 0; half < 60; ++half) {
      const Vector w_new = w - step * grad_w;
      const double b_new = b - step * grad_b;
      const double objective_new = logistic_objective(features, labels, w_new, b_new, cfg.l2);
      if (objective_new <= objective - 1e-4 * step * slope) {
        w = w_new;
        b = b_new;
        objective = objective_new;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // step underflow: as converged as the arithmetic allows
  }

  LinearClassifier clf;
  clf.weights = std::move(w);
  clf.bias = b;
  clf.trained = true;
  return clf;
}

int MulticlassClassifier::predict(const Eigen::Ref<const Vector>& x) const {
  int best_class = classes.front();
  double best = per_class.front().decision(x);
  for (std::size_t c = 1; c < classes.size(); ++c) {
    const double v = per_class[c].decision(x);
    if (v > best) {
      best = v;
      best_class = classes[c];
    }
  }
  return best_class;
}

std::vector<int> MulticlassClassifier::predict_all(const Matrix& features) const {
  std::vector<int> out(static_cast<std::size_t>(features.rows()));
  for (Index i = 0; i < features.rows(); ++i) out[static_cast<std::size_t>(i)] = predict(features.row(i));
  return out;
}

MulticlassClassifier fit_logistic_multiclass(const Matrix& features,
                                             const std::vector<int>& labels,
                                             const LogisticConfig& cfg) {
  std::set<int> classes(labels.begin(), labels.end());
  if (classes.size() < 2) {
    throw ValidationError("fit_logistic_multiclass: need at least two classes");
  }
  MulticlassClassifier mc;
  for (int cls : classes) {
    std::vector<int> binary(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) binary[i] = labels[i] == cls ? 1 : 0;
    mc.classes.push_back(cls);
    mc.per_class.push_back(fit_logistic(features, binary, cfg));
  }
  return mc;
}

double RidgeRegressor::predict(const Eigen::Ref<const Vector>& x) const {
  return weights.dot(x) + bias;
}

std::vector<double> RidgeRegressor::predict_all(const Matrix& features) const {
  std::vector<double> out(static_cast<std::size_t>(features.rows()));
  for (Index i = 0; i < features.rows(); ++i) out[static_cast<std::size_t>(i)] = predict(features.row(i));
  return out;
}

RidgeRegressor fit_ridge(const Matrix& features, const Vector& targets, double lambda) {
  if (lambda < 0.0) throw std::domain_error("fit_ridge: lambda must be >= 0");
  if (features.rows() != targets.size() || features.rows() == 0) {
    throw ValidationError("fit_ridge: features and targets must align and be non-empty");
  }
  const Index d = features.cols();
  Matrix augmented(features.rows(), d + 1);
  augmented.leftCols(d) = features;
  augmented.col(d).setOnes();

  Matrix normal = augmented.transpose() * augmented;
  for (Index i = 0; i < d; ++i) normal(i, i) += lambda;  // bias stays unregularized
  const Vector rhs = augmented.transpose() * targets;
  const Vector solution = normal.ldlt().solve(rhs);

  RidgeRegressor reg;
  reg.weights = solution.head(d);
  reg.bias = solution(d);
  reg.lambda = lambda;
  reg.trained = true;
  return reg;
}

}  // namespace ctgcn
