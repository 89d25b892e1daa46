#pragma once

#include <vector>

#include "ctgcn/types.hpp"

namespace ctgcn {

// Mann-Whitney AUC via rank summation with midrank tie handling:
// P(score+ > score-) + 0.5 P(tie). Throws ValidationError unless both
// classes are present.
double auc_score(const std::vector<double>& scores, const std::vector<int>& labels);

// Mean squared error; equal nonzero lengths required.
double mse_score(const std::vector<double>& predictions, const std::vector<double>& targets);

double accuracy_score(const std::vector<int>& predictions, const std::vector<int>& labels);

}  // namespace ctgcn
