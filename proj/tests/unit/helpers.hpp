#pragma once

#include <initializer_list>
#include <random>

#include "liftkit/space.hpp"

namespace testing {

inline liftkit::Point pt(std::initializer_list<double> v) {
  liftkit::Point p(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

inline liftkit::Point uniform_point(std::mt19937_64& rng, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  liftkit::Point p(dim);
  for (int i = 0; i < dim; ++i) p(i) = u(rng);
  return p;
}

}  // namespace testing
