#pragma once

#include <Eigen/Dense>

namespace liftkit {

struct SingularSummary {
  double sigma_max = 0.0;
  /// inf over unit v of |J v|: the smallest singular value when J has at
  /// least as many rows as columns, zero otherwise (nontrivial kernel).
  double sigma_min = 0.0;
};

SingularSummary singular_summary(const Eigen::MatrixXd& jac);

/// 2-norm of the inverse of a square matrix, i.e. 1 / sigma_min; infinity if singular.
double inverse_norm(const Eigen::MatrixXd& square);

}  // namespace liftkit
