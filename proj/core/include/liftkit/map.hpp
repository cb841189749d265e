#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liftkit/space.hpp"

namespace liftkit {

enum class JacobianMode { Analytic, Automatic, FiniteDifference };

const char* to_string(JacobianMode mode);

/// An evaluable map between two spaces with a Jacobian strategy.
/// Immutable and safe to share between threads.
class MapHandle {
 public:
  using Evaluator = std::function<Vec(const Point&)>;
  using JacobianFn = std::function<Mat(const Point&)>;

  MapHandle(std::string name, Space domain, Space codomain, Evaluator f, JacobianFn jac, JacobianMode mode);

  const std::string& name() const { return name_; }
  const Space& domain() const { return domain_; }
  const Space& codomain() const { return codomain_; }
  JacobianMode jacobian_mode() const { return mode_; }
  bool square() const { return domain_.dim() == codomain_.dim(); }

  /// f(x) in canonical codomain coordinates. Throws InputError on dimension
  /// mismatch and DomainError outside the domain.
  Point eval(const Point& x) const;
  Point operator()(const Point& x) const { return eval(x); }

  /// Same map, Jacobian by central differences.
  MapHandle with_finite_difference() const;

  /// The analytic or AD Jacobian regardless of mode; empty for
  /// finite-difference-only handles.
  const JacobianFn& exact_jacobian() const { return jac_; }

 private:
  std::string name_;
  Space domain_;
  Space codomain_;
  Evaluator f_;
  JacobianFn jac_;
  JacobianMode mode_;
};

/// A map request: a built-in name such as "shear3" or "powk(3)", or an
/// expression such as "(x*x, x+y)".
struct MapSpec {
  std::string text;
  std::string name;
  std::vector<std::string> vars;
  std::optional<Space> domain;
  std::optional<Space> codomain;
  /// Open-subset predicate g(x) > 0 restricting the domain.
  std::optional<std::string> domain_predicate;
  /// Rows separated by ';', entries by ',': "1, 3*y^2; 0, 1".
  std::optional<std::string> jacobian;
  bool finite_difference = false;
};

/// Built-in handles have analytic Jacobians, expressions use AD; finite
/// differences only on request. Throws InputError (or ParseError) for unknown
/// names, bad parameters and dimension mismatches.
MapHandle resolve_map(const MapSpec& spec);
MapHandle resolve_map(const std::string& text);

/// Stable built-in identifiers (parametrized ones shown with their parameter).
std::vector<std::string> builtin_names();
bool is_builtin(const std::string& text);

/// Explicit inverse handles used by duality checks: shear3 -> shear3_inv,
/// expmap -> logmap, identity(n) -> identity(n).
std::optional<MapHandle> builtin_inverse(const MapHandle& f);

/// Jacobian dispatched by mode; finite differences use central steps
/// h_i = 1e-6 * max(1, |x_i|).
Mat jacobian_at(const MapHandle& f, const Point& x);
Mat finite_difference_jacobian(const MapHandle& f, const Point& x);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 30;
};

struct SolveResult {
  Point x;
  int iterations = 0;
  double residual = 0.0;
  double sigma_min = 0.0;
};

/// Damped Newton for f(x) = y: a step is accepted only if the residual norm
/// strictly decreases, halving up to max_halvings times.
///
/// Throws SingularityError when sigma_min < 1e-14 * sigma_max,
/// ConvergenceError when max_iter is exhausted or the line search stalls,
/// DomainError when every trial point leaves the domain.
SolveResult local_solve(const MapHandle& f, const Point& y, const Point& x_guess, SolveOptions opts = {});

/// 2-norm of the chart residual f(x) - y (wrapped on quotient codomains).
double residual_norm(const MapHandle& f, const Point& x, const Point& y);

}  // namespace liftkit
