#include "liftkit/linalg.hpp"

#include <limits>

namespace liftkit {

SingularSummary singular_summary(const Eigen::MatrixXd& jac) {
  SingularSummary out;
  if (jac.size() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const Eigen::VectorXd& s = svd.singularValues();
  out.sigma_max = s(0);
  out.sigma_min = jac.rows() >= jac.cols() ? s(s.size() - 1) : 0.0;
  return out;
}

double inverse_norm(const Eigen::MatrixXd& square) {
  const double smin = singular_summary(square).sigma_min;
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / smin;
}

}  // namespace liftkit
