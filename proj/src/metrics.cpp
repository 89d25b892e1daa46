#include "ctgcn/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "ctgcn/errors.hpp"

namespace ctgcn {

double auc_score(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw ValidationError("auc_score: scores and labels must align and be non-empty");
  }
  const std::size_t n = scores.size();
  std::size_t positives = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) throw ValidationError("auc_score: labels must be 0/1");
    positives += static_cast<std::size_t>(label);
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw ValidationError("auc_score: both classes must be present");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midranks over tied score runs; accumulate positive ranks.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += midrank;
    }
    i = j;
  }
  const double u = positive_rank_sum -
                   static_cast<double>(positives) * static_cast<double>(positives + 1) / 2.0;
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

double mse_score(const std::vector<double>& predictions, const std::vector<double>& targets) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw ValidationError("mse_score: predictions and targets must align and be non-empty");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double r = predictions[i] - targets[i];
    acc += r * r;
  }
  return acc / static_cast<double>(predictions.size());
}

double accuracy_score(const std::vector<int>& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size() || predictions.empty()) {
    throw ValidationError("accuracy_score: predictions and labels must align and be non-empty");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace ctgcn
