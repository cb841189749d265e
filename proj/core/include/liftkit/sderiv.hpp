#pragma once

#include <vector>

#include "liftkit/map.hpp"

namespace liftkit {

enum class DerivMethod { JacobianSvd, ShellSampling };

const char* to_string(DerivMethod m);

/// Ratio extremes d(f(z), f(x)) / d(z, x) over one sampled sphere.
struct ShellScale {
  double radius = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

struct ScalarDerivEstimate {
  double d_minus = 0.0;
  double d_plus = 0.0;
  DerivMethod method = DerivMethod::JacobianSvd;
  std::vector<ShellScale> scale_report;
  /// Shell method: extremes on the two smallest shells agree to 1%.
  bool stable = true;
};

struct ShellOptions {
  int shells = 6;  // radii rho0 * 2^-k, k = 0..shells
  double rho0 = 0.0;  // 0 selects 1e-2 * (1 + |x|)
  int directions_per_dim = 64;
  bool refine = true;
};

ScalarDerivEstimate scalar_derivatives(const MapHandle& f, const Point& x,
                                       DerivMethod method = DerivMethod::JacobianSvd, ShellOptions opts = {});

struct SurjectionEstimate {
  double value = 0.0;
  std::vector<double> radii_used;
  /// Sur(f,x)(t) / t per radius.
  std::vector<double> ratios;
  /// Codomain dimension exceeds domain dimension: the image has empty interior.
  bool dimension_shortcut = false;
};

/// Sur(f,x)(t) estimated as the distance from f(x) to the sampled image of
/// the sphere of radius t. Exact in the limit for local homeomorphisms only.
/// Empty `radii` selects the shell radii of `opts`.
SurjectionEstimate surjection_constant(const MapHandle& f, const Point& x, std::vector<double> radii = {},
                                       ShellOptions opts = {});

}  // namespace liftkit
