#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liftkit/map.hpp"
#include "liftkit/path.hpp"
#include "liftkit/weight.hpp"

namespace liftkit {

struct LiftOptions {
  double step_init = 1e-2;
  double step_min = 1e-12;
  double step_max = 0.1;
  double corrector_tol = 1e-10;
  double blowup_radius = 1e6;
  double singular_threshold = 1e-10;
  int max_corrector_iter = 8;
  bool record_monitors = true;
  long max_steps = 2'000'000;

  /// Throws InputError unless 0 < step_min <= step_init <= step_max and corrector_tol > 0.
  void validate() const;
};

enum class VerdictKind { Completed, FailedBlowUp, FailedSingular, FailedStall, FailedDomainExit };

struct Verdict {
  VerdictKind kind = VerdictKind::Completed;
  /// Supremum of lifted (normalized) parameters; 1 when completed.
  double b = 1.0;
  /// Chart norm of the last accepted point (blow-up).
  double last_norm = 0.0;
  /// Smallest singular value at the last accepted point.
  double d_minus = 0.0;

  bool completed() const { return kind == VerdictKind::Completed; }
  std::string name() const;
};

/// One accepted point of the lift; t is normalized to [0, 1] over the path domain.
struct LiftNode {
  double t = 0.0;
  Point x;
  double residual = 0.0;
  double d_minus = 0.0;
  double step = 0.0;
};

struct LiftTrace {
  std::vector<LiftNode> nodes;
  /// Chord length of the lifted polygon.
  double lift_length = 0.0;
  Verdict verdict;
  /// Set on failure: the engine demands convergence of the whole trace, which
  /// is stronger than a convergent subsequence.
  std::string note;

  const Point& endpoint() const { return nodes.back().x; }
};

/// Predictor-corrector continuation of x with f(x(t)) = p(t). The predictor is
/// the Jacobian step, the corrector local_solve; failed corrections halve the
/// step, successes grow it by 1.5 up to step_max.
///
/// Throws InputError when f is not square or |f(x0) - p(t0)| > corrector_tol,
/// DomainError when x0 is outside the domain.
LiftTrace lift_path(const MapHandle& f, const Path& p, const Point& x0, LiftOptions opts = {});

struct TailDiameter {
  double t = 0.0;
  double diameter = 0.0;
};

struct TraceAnalysis {
  double alpha_hat = 0.0;
  std::optional<double> weighted_alpha_hat;
  std::vector<TailDiameter> tail_diameters;
  Verdict verdict;
};

/// Monitors over a trace with at least two nodes. The weighted minimum uses
/// d(x, anchor), anchor defaulting to the first node. Tail diameters are
/// taken over node suffixes {x_m : t_m >= t} for t approaching the last node
/// dyadically.
TraceAnalysis analyze_trace(const LiftTrace& trace, const Space& space, const std::optional<Weight>& weight = {},
                            const std::optional<Point>& anchor = {});

}  // namespace liftkit
