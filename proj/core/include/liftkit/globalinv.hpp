#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liftkit/lift.hpp"
#include "liftkit/map.hpp"
#include "liftkit/region.hpp"

namespace liftkit {

struct InvertResult {
  /// Set when the lift completed.
  std::optional<Point> x;
  LiftTrace trace;
};

/// Lifts the segment f(x0) -> y starting at x0.
InvertResult invert_at(const MapHandle& f, const Point& y, const Point& x0, LiftOptions opts = {});

struct Preimage {
  Point x;
  double residual = 0.0;
};

enum class FiberMethod { Multistart, LoopOrbit };

const char* to_string(FiberMethod m);

struct Monodromy {
  /// Loop action on the orbit: point i maps to permutation[i]. Empty when the
  /// orbit did not close.
  std::vector<int> permutation;
  /// Constant shift between successive orbit points, when detected.
  std::optional<Vec> translation;
  bool closed = false;
  int orbit_size = 0;
};

struct FiberReport {
  Point target;
  std::vector<Preimage> preimages;
  FiberMethod method = FiberMethod::Multistart;
  std::optional<Monodromy> monodromy;
  /// Lift failure that cut an orbit short.
  std::optional<Verdict> failure;
  std::string disclaimer;
  int starts_used = 0;
};

/// Deterministic Halton seeds in the region, local_solve from each, points
/// merged by the point-identity tolerance and sorted lexicographically.
/// Completeness is not guaranteed.
FiberReport fiber_enumerate(const MapHandle& f, const Point& y, const Region& seeds, int n_starts,
                            SolveOptions opts = {.tol = 1e-12, .max_iter = 60, .max_halvings = 30},
                            std::uint64_t seed = 0);

/// Lifts the loop repeatedly from the current endpoint until an endpoint
/// repeats or max_orbit lifts were made.
FiberReport sheet_count(const MapHandle& f, const Point& y, const Path& loop, const Point& x_start,
                        int max_orbit = 8, LiftOptions opts = {});

struct QIBounds {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  /// Minimum of D- over samples with f(x) in K, when K was given and hit.
  std::optional<double> alpha_k;
  int n_samples = 0;
  int n_in_k = 0;
};

/// Sampled D- / D+ extremes over the region (Jacobian singular values).
QIBounds quasi_isometry_bounds(const MapHandle& f, const Region& region, int n_samples,
                               const std::optional<Region>& compact_k = std::nullopt, std::uint64_t seed = 0);

}  // namespace liftkit
