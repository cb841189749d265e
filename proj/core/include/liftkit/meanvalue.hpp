#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liftkit/map.hpp"
#include "liftkit/path.hpp"

namespace liftkit {

/// Upper: ratios d(p(u), p(v)) / l(q_{u,v}). Lower: ratios l(p_{u,v}) / d(q(u), q(v)),
/// infinite when q(u) = q(v). Here p = f o q.
enum class Direction { Upper, Lower };

const char* to_string(Direction d);

/// f o q as a path in the codomain; carries the breakpoints of q.
Path compose(const MapHandle& f, const Path& q);

/// Upper: max(ratio(a,t), ratio(t,b)) - ratio(a,b), nonnegative up to rounding.
/// Lower: ratio(a,b) - min(ratio(a,t), ratio(t,b)), likewise nonnegative.
/// Throws PreconditionError on a zero-length piece (upper form).
double split_inequality_slack(const MapHandle& f, const Path& q, double t, Direction dir = Direction::Upper,
                              LengthOptions opts = {});

struct BisectionCertificate {
  Direction direction = Direction::Upper;
  double tau = 0.0;
  std::vector<std::pair<double, double>> intervals;
  std::vector<double> ratios;
  /// Ratio over the whole domain: d(p(a),p(b))/l(q) or l(p)/d(q(a),q(b)).
  double global_ratio = 0.0;
  /// D+ (upper) or D- (lower) of f at q(tau).
  double derivative_at_tau = 0.0;
  /// Upper: D+ - global ratio. Lower: global ratio - D-. Nonnegative when the
  /// inequality holds exactly.
  double final_slack = 0.0;
  /// Inequality holds within 5% relative.
  bool satisfied = false;
};

/// Nested bisection keeping the half with the larger (upper) or smaller
/// (lower) ratio; ties go left. Stops at width < tol_t or depth 60.
BisectionCertificate find_tau(const MapHandle& f, const Path& q, Direction dir = Direction::Upper,
                              double tol_t = 1e-9, LengthOptions opts = {});

struct BoundCheck {
  double lhs = 0.0;
  /// Sampled extreme times l(q), before the 5% inflation/deflation.
  double rhs = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct LengthBoundsReport {
  BoundCheck upper;
  BoundCheck lower;
  double sup_d_plus = 0.0;
  double inf_d_minus = 0.0;
  double length_q = 0.0;
  double length_p = 0.0;
  int samples = 0;
};

/// l(p) <= sup D+ l(q) and l(p) >= inf D- l(q) over sampled points of Im q;
/// sampled extremes inflated/deflated by 5%.
LengthBoundsReport length_bounds_report(const MapHandle& f, const Path& q, int samples = 257,
                                        LengthOptions opts = {});

}  // namespace liftkit
