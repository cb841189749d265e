#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace liftkit::detail {

// Compass search over unit directions for an extreme of g. g may return NaN
// for inadmissible directions; those never win.
inline Eigen::VectorXd refine_direction(const std::function<double(const Eigen::VectorXd&)>& g,
                                        Eigen::VectorXd u, double best, double step, bool maximize,
                                        double* best_out, int max_iter = 80) {
  const int n = static_cast<int>(u.size());
  if (n < 2) {
    *best_out = best;
    return u;
  }
  auto better = [&](double a, double b) { return std::isfinite(a) && (maximize ? a > b : a < b); };
  for (int it = 0; it < max_iter && step > 1e-7; ++it) {
    Eigen::VectorXd cand_best = u;
    double val_best = best;
    for (int i = 0; i < n; ++i) {
      for (int sgn : {1, -1}) {
        Eigen::VectorXd v = u;
        v(i) += sgn * step;
        const double nv = v.norm();
        if (nv == 0.0) continue;
        v /= nv;
        double gv;
        try {
          gv = g(v);
        } catch (...) {
          gv = std::numeric_limits<double>::quiet_NaN();
        }
        if (better(gv, val_best)) {
          val_best = gv;
          cand_best = v;
        }
      }
    }
    if (better(val_best, best)) {
      best = val_best;
      u = cand_best;
    } else {
      step *= 0.5;
    }
  }
  *best_out = best;
  return u;
}

}  // namespace liftkit::detail
