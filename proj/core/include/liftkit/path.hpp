#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "liftkit/expr.hpp"
#include "liftkit/space.hpp"

namespace liftkit {

struct SegmentPath {
  Point a;
  Point b;
};

/// Linear interpolation between knots at strictly increasing parameters.
/// `polyline` marks knots that came from an evenly parametrized polyline.
struct SampledPath {
  std::vector<double> params;
  std::vector<Point> knots;
  bool polyline = false;
};

/// center + radius * (cos 2 pi w s, sin 2 pi w s) for s in [0, 1]; planar.
struct LoopPath {
  Point center;
  double radius = 1.0;
  int winding = 1;
};

/// Components in one variable; evaluated at offset + scale * t.
struct ExpressionPath {
  std::vector<expr::Ast> components;
  std::string text;
  double offset = 0.0;
  double scale = 1.0;
};

/// Arbitrary continuous curve, used for compositions such as f o q.
struct CallablePath {
  std::function<Point(double)> fn;
  std::vector<double> breakpoints;
};

/// Parametric curve on a closed interval of a space. Immutable.
class Path {
 public:
  using Kind = std::variant<SegmentPath, SampledPath, LoopPath, ExpressionPath, CallablePath>;

  /// a -> b on [0, 1] along the space geodesic.
  static Path segment(Point a, Point b, std::optional<Space> space = std::nullopt);
  /// Knots at evenly spaced parameters on [0, 1].
  static Path polyline(std::vector<Point> knots, std::optional<Space> space = std::nullopt);
  static Path sampled(std::vector<double> params, std::vector<Point> knots,
                      std::optional<Space> space = std::nullopt);
  /// Planar circle on [0, 1] starting at center + (radius, 0).
  static Path loop(Point center, double radius, int winding = 1);
  /// Components in `var` (default "t") on [t0, t1].
  static Path expression(const std::string& text, double t0, double t1, const std::string& var = "t",
                         std::optional<Space> space = std::nullopt);
  static Path callable(std::function<Point(double)> fn, double t0, double t1, Space space,
                       std::vector<double> breakpoints = {});

  const Kind& kind() const { return *kind_; }
  const Space& space() const { return space_; }
  int dim() const { return space_.dim(); }
  double t0() const { return t0_; }
  double t1() const { return t1_; }

  /// Throws InputError for t outside the domain.
  Point eval(double t) const;

  /// Derivative with respect to the parameter (one-sided at kinks).
  Vec velocity(double t) const;

  /// q_{t,s}: same curve on the narrower domain [t, s].
  Path restrict(double t, double s) const;

  /// Parameters strictly inside the domain where the curve may have a kink.
  std::vector<double> breakpoints() const;

  /// True when every piece between breakpoints is a chart-linear geodesic.
  bool piecewise_linear() const;

  std::string describe() const;

 private:
  friend Path reverse_path(const Path& p);
  Path(Kind kind, Space space, double t0, double t1);

  std::shared_ptr<const Kind> kind_;
  Space space_;
  double t0_ = 0.0;
  double t1_ = 1.0;
};

struct PathLengthResult {
  double value = 0.0;
  bool converged = false;
  long partitions_used = 0;
  /// Chord sums over nested dyadic partitions; nondecreasing.
  std::vector<double> approximants;
};

struct LengthOptions {
  double rel_tol = 1e-8;
  int k_max = 22;
};

/// Length as the supremum of chord sums: nested partitions are doubled until
/// successive sums agree to rel_tol. Non-convergence is flagged, not thrown.
PathLengthResult path_length(const Path& p, double sub_t0, double sub_t1, LengthOptions opts = {});
PathLengthResult path_length(const Path& p, LengthOptions opts = {});

/// Repeated sub-arc length queries on one path; exact and logarithmic-time
/// for piecewise-linear paths in flat spaces.
class LengthOracle {
 public:
  explicit LengthOracle(Path p, LengthOptions opts = {});
  double length(double u, double v) const;
  const Path& path() const { return path_; }

 private:
  Path path_;
  LengthOptions opts_;
  std::vector<double> params_;
  std::vector<double> cumulative_;
};

struct ArcLengthPath {
  Path path;
  double length = 0.0;
  bool degenerate = false;
};

/// Unit-speed sampled reparametrization on [0, L], where L is the length of the
/// knot polygon. Positive length on every nontrivial sub-interval.
/// Throws PreconditionError if the input is not rectifiable.
ArcLengthPath reparam_arclength(const Path& p, int n_knots = 1025, LengthOptions opts = {});

/// p_bar(t) = p(t0 + t1 - t).
Path reverse_path(const Path& p);

}  // namespace liftkit
