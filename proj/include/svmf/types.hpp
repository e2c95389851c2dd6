#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace svmf {

using Index = Eigen::Index;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Upper bound on any concentration parameter. A component that collapses onto
// a single observation would otherwise drive kappa to infinity.
inline constexpr double kKappaCap = 1e6;

inline constexpr const char* kVersion = "svmf 1.0.0";

}  // namespace svmf
