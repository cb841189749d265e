#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liftkit/map.hpp"
#include "liftkit/region.hpp"
#include "liftkit/weight.hpp"

namespace liftkit {

struct ProfileBudget {
  int starts = 32;  // multistart descents per radius
  int boundary_samples = 0;  // 0 selects 64 * dim
  int descent_iters = 60;
  std::uint64_t seed = 0;
};

struct ProfileSample {
  Point x;
  double d_minus = 0.0;
  /// d(x, x0)
  double distance = 0.0;
};

struct HadamardProfile {
  Point x0;
  std::vector<double> radii;
  /// Best-found inf of D- over the closed ball of each radius; nonincreasing.
  std::vector<double> infima;
  /// Trapezoid partial integrals of the infima, starting at 0 on radii[0].
  std::vector<double> partial_integrals;
  std::vector<ProfileSample> samples;
  int samples_per_radius = 0;
  /// False when some sample had D- = 0 (the map is not regular there).
  bool regular = true;
  ProfileBudget budget;
};

/// 24 radii log-spaced over [T_max / 1000, T_max], T_max = 100 (1 + |x0|).
std::vector<double> default_radii(const Point& x0, int count = 24);

/// Multistart compass descent of the smallest singular value inside each
/// ball, plus sphere sampling. Every sample is kept; r_j is the minimum over
/// all samples within distance t_j, so nestedness holds by construction.
/// Best-effort: the true infimum may be lower.
HadamardProfile ball_infimum_profile(const MapHandle& f, const Point& x0, std::vector<double> radii = {},
                                     ProfileBudget budget = {});

enum class DivergenceClass { Divergent, Convergent, Inconclusive };

const char* to_string(DivergenceClass c);

struct ModelFit {
  std::string model;  // constant, inverse, power, exponential
  double rms = 0.0;
  std::vector<double> params;
  bool admissible = false;
  bool integral_diverges = false;
};

struct DivergenceReport {
  DivergenceClass cls = DivergenceClass::Inconclusive;
  std::vector<ModelFit> fits;
  std::string best_model;
  double threshold = 0.15;
  /// Always present unless the class is divergent.
  std::string caveat;
};

/// Fits log r against log t and t on the last decade of radii. Throws
/// InputError with fewer than 8 radii or a span under 1.5 decades.
DivergenceReport classify_divergence(const HadamardProfile& profile);

struct WeightValidation {
  bool ok = false;
  Divergence divergence = Divergence::Unknown;
  std::vector<std::string> reasons;
};

/// Positivity and monotonicity on a dense grid over [0, t_max] plus the
/// divergence of the integral of 1/omega.
WeightValidation validate_weight(const Weight& w, double t_max = 100.0);

struct WeightCertificate {
  bool pass = false;
  /// min over samples of D-(x) * omega(d(x, x0)) - 1.
  double worst_margin = 0.0;
  Point worst_point;
  int n_samples = 0;
  /// pass together with a validated weight.
  bool hadamard_holds_on_region = false;
};

/// Throws PreconditionError when w does not validate as a weight.
WeightCertificate weight_certificate(const MapHandle& f, const Point& x0, const Weight& w, const Region& region,
                                     int n_samples, std::uint64_t seed = 0);
WeightCertificate weight_certificate(const MapHandle& f, const Point& x0, const Weight& w,
                                     const std::vector<Point>& samples);

/// Step weight 1 / r_j on (t_{j-1}, t_j]; divergence taken from the class.
Weight weight_from_profile(const HadamardProfile& profile, DivergenceClass cls);

}  // namespace liftkit
