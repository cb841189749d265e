#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liftkit/lift.hpp"
#include "liftkit/map.hpp"
#include "liftkit/path.hpp"
#include "liftkit/region.hpp"
#include "liftkit/weight.hpp"

namespace liftkit {

/// f: X x Y -> R^n with x the first x_dim coordinates; the solution set is
/// Z_w = {(x, y) : f(x, y) = w}.
struct ImplicitProblem {
  MapHandle f;
  int x_dim = 1;
  int y_dim = 1;
  Point w;

  /// Checks that the codomain and the y-block have the same dimension.
  static ImplicitProblem make(MapHandle f, int x_dim, Point w);

  Point join(const Point& x, const Point& y) const;
  /// Columns of the full Jacobian: d_x f (n x m) and d_y f (n x n).
  void blocks(const Point& x, const Point& y, Mat* dx, Mat* dy) const;
  double residual(const Point& x, const Point& y) const;
};

struct ImplicitOptions {
  /// Residual bound |f(x, y) - w| kept at every node.
  double tol = 1e-8;
  /// Local error per step of the integrator, relative to 1 + |y|.
  double ode_tol = 1e-9;
  double step_init = 1e-2;
  double step_min = 1e-12;
  double step_max = 0.1;
  double singular_threshold = 1e-6;
  double blowup_radius = 1e6;
  int newton_max_iter = 50;
  long max_steps = 1'000'000;
};

enum class BoundStatus { NoWeight, Holds, Violated, NotApplicable };

const char* to_string(BoundStatus s);

struct ImplicitNode {
  double t = 0.0;
  Point x;
  Point y;
  double residual = 0.0;
  /// |d_y f^{-1}| |d_x f| in 2-norms.
  double monitor = 0.0;
  double sigma_min = 0.0;
  /// Integral of 1/omega from |y(0)| to |y(t)|, when a weight was supplied.
  std::optional<double> weight_integral;
  double step = 0.0;
};

struct ImplicitTrace {
  std::vector<ImplicitNode> nodes;
  Verdict verdict;
  BoundStatus bound_status = BoundStatus::NoWeight;
  /// Set on a fold: the point where d_y f becomes singular.
  std::optional<Point> fold_x;
  std::optional<Point> fold_y;
  std::string note;

  const Point& endpoint() const { return nodes.back().y; }
};

/// RK4 on y' = -d_y f^{-1} d_x f p'(t) with step doubling for the error
/// estimate and a y-only Newton projection onto f = w after every step.
/// Throws InputError when the start residual exceeds opts.tol.
ImplicitTrace davidenko_lift(const ImplicitProblem& prob, const Path& p, const Point& y0,
                             const std::optional<Weight>& weight = std::nullopt, ImplicitOptions opts = {});

struct ImplicitResult {
  std::optional<Point> y;
  ImplicitTrace trace;
};

/// Continues the implicit function along the segment x0 -> x_target.
ImplicitResult implicit_eval(const ImplicitProblem& prob, const Point& x_target, const Point& x0, const Point& y0,
                             ImplicitOptions opts = {});

struct BranchGroup {
  /// (x, y) points of Z_w joined by continuation.
  std::vector<std::pair<Point, Point>> members;
};

struct BranchProbe {
  std::vector<BranchGroup> groups;
  int count = 0;
  std::string label;
};

/// Solves f(x, .) = w from seeds in `y_seeds` at every x of the grid, then
/// joins solutions at neighbouring grid points when continuation along the
/// connecting segment carries one onto the other. The group count is a
/// heuristic lower bound on the number of components met by the grid.
BranchProbe branch_probe(const ImplicitProblem& prob, const std::vector<Point>& x_grid, const Region& y_seeds,
                         int n_starts, ImplicitOptions opts = {}, std::uint64_t seed = 0);

/// G(x, y) = (x, f(x, y)): lifting (p(t), w) through G is continuation on Z_w.
MapHandle projection_lift_map(const ImplicitProblem& prob);

}  // namespace liftkit
