#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace liftkit {

using Point = Eigen::VectorXd;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace expr {
class Ast;
}

class Space;

/// R^dim with the p-norm; norm_p may be +infinity.
struct Euclidean {
  int dim = 1;
  double norm_p = 2.0;
};

/// R mod 2*pi with angular distance; charts stored in [-pi, pi).
struct CircleQuotient {};

/// Flat torus (R mod 2*pi)^dim; distance is the 2-norm of the wrapped difference.
struct Torus {
  int dim = 1;
};

/// Cartesian product; distance is the sum of the factor distances.
struct Product {
  std::vector<Space> factors;
};

/// Open subset {x : g(x) > 0} of a base space, where g is a parsed expression
/// over the base chart coordinates.
struct OpenSubset {
  std::shared_ptr<const Space> base;
  std::shared_ptr<const expr::Ast> predicate;
  std::string predicate_text;
};

/// Metric-space descriptor. Immutable value type; copies share the
/// predicate and base space.
class Space {
 public:
  using Kind = std::variant<Euclidean, CircleQuotient, Torus, Product, OpenSubset>;

  Space();  // Euclidean(1, 2)
  explicit Space(Kind kind);

  static Space euclidean(int dim, double norm_p = 2.0);
  static Space circle();
  static Space torus(int dim);
  static Space product(std::vector<Space> factors);
  /// Parses `predicate` over `vars` (defaults to x, y, z, ... by dimension).
  static Space open_subset(const Space& base, const std::string& predicate,
                           std::vector<std::string> vars = {});

  const Kind& kind() const { return kind_; }
  int dim() const { return dim_; }

  /// Human-readable descriptor, e.g. "euclidean(2,p=2)".
  std::string describe() const;

  /// Throws InputError on dimension mismatch.
  void check_dim(const Point& a) const;

  /// Membership; false outside an OpenSubset (or when its predicate fails to evaluate).
  bool contains(const Point& a) const;

  /// Canonical representative: quotient coordinates wrapped to [-pi, pi).
  Point canonical(const Point& a) const;

  /// Shortest chart displacement from a to b (wrapped on quotient factors).
  Vec difference(const Point& a, const Point& b) const;

  /// Constant-speed geodesic interpolation a -> b at fraction lambda.
  Point interpolate(const Point& a, const Point& b, double lambda) const;

  /// Metric distance. Throws InputError on dimension mismatch and DomainError
  /// for points outside an OpenSubset.
  double distance(const Point& a, const Point& b) const;

  /// True when linear interpolation in the chart is a geodesic, so
  /// piecewise-linear paths have exactly computable length.
  bool is_flat() const;

 private:
  double raw_distance(const Point& a, const Point& b) const;

  Kind kind_;
  int dim_ = 1;
};

/// Wrap an angle to [-pi, pi).
double wrap_angle(double theta);

/// Point-identity test: sup-norm difference within 1e-9 relative to the
/// coordinate magnitude (floor 1).
bool same_point(const Point& a, const Point& b, double rel_tol = 1e-9);

/// Parses "euclidean(2)", "euclidean(2,1)", "euclidean(2,inf)", "circle",
/// "torus(2)", "product(euclidean(1),euclidean(1))".
Space parse_space(const std::string& text);

}  // namespace liftkit
