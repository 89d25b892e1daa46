#pragma once

#include <vector>

#include "ctgcn/types.hpp"

namespace ctgcn {

struct LogisticConfig {
  double l2 = 1e-4;          // applied to weights, not the bias
  int max_iterations = 5000;
  double gradient_tolerance = 1e-6;
};

// Binary L2-regularized logistic regression, fit by gradient descent with
// backtracking line search from a zero start (deterministic).
struct LinearClassifier {
  Vector weights;
  double bias = 0.0;
  bool trained = false;

  double decision(const Eigen::Ref<const Vector>& x) const;
  double probability(const Eigen::Ref<const Vector>& x) const;
  std::vector<double> decision_values(const Matrix& features) const;
};

LinearClassifier fit_logistic(const Matrix& features, const std::vector<int>& labels,
                              const LogisticConfig& cfg = {});

// One-vs-rest multiclass wrapper; predicts the argmax decision value.
struct MulticlassClassifier {
  std::vector<int> classes;
  std::vector<LinearClassifier> per_class;

  int predict(const Eigen::Ref<const Vector>& x) const;
  std::vector<int> predict_all(const Matrix& features) const;
};

MulticlassClassifier fit_logistic_multiclass(const Matrix& features,
                                             const std::vector<int>& labels,
                                             const LogisticConfig& cfg = {});

// Ridge regression solved in closed form from the normal equations
// (X^T X + lambda I) w = X^T y with an unregularized bias column.
struct RidgeRegressor {
  Vector weights;
  double bias = 0.0;
  double lambda = 0.0;
  bool trained = false;

  double predict(const Eigen::Ref<const Vector>& x) const;
  std::vector<double> predict_all(const Matrix& features) const;
};

RidgeRegressor fit_ridge(const Matrix& features, const Vector& targets, double lambda);

}  // namespace ctgcn
