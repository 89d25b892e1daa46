#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ctgcn {

using Real = double;
using Index = Eigen::Index;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Row-major storage = CSR; all graph adjacencies and selection matrices use it.
using SparseMatrix = Eigen::SparseMatrix<Real, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<Real>;

}  // namespace ctgcn
