#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace liftkit {

/// Halton sequence in [0,1)^dim with an optional seeded Cranley-Patterson
/// rotation. Seed 0 still applies a (fixed) rotation so every caller sees the
/// same stream for the same seed.
class Halton {
 public:
  Halton(int dim, std::uint64_t seed = 0);

  Eigen::VectorXd next();
  std::vector<Eigen::VectorXd> take(int n);

  int dim() const { return static_cast<int>(shift_.size()); }

 private:
  std::vector<double> shift_;
  std::uint64_t index_ = 1;
};

/// Radical inverse of `index` in base `base`.
double radical_inverse(std::uint64_t index, int base);

/// Deterministic unit directions covering the sphere S^{dim-1}.
///
/// dim 1 yields {+1, -1}; dim 2 yields `count` equally spaced angles; higher
/// dimensions map Halton points through Box-Muller and normalize.
std::vector<Eigen::VectorXd> sphere_directions(int dim, int count);

}  // namespace liftkit
