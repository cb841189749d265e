#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "liftkit/errors.hpp"

// Small expression language for maps, predicates and weights.
//
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := atom ("^" factor)?
//   atom   := number | name | name "(" expr ("," expr)* ")" | "(" expr ")" | "-" atom
//
// A multi-component map is written "(e1, e2, ...)" at top level. "^" is
// right-associative and unary minus applies to an atom, so "-x^2" is (-x)^2.

namespace liftkit::expr {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Atan, Tanh, Min, Max };

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  int var = -1;
  Func func = Func::Sin;
  int lhs = -1;
  int rhs = -1;
  Span span;
};

/// Forward-mode dual number a + b*eps.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};

/// One parsed scalar component. Immutable; evaluation is reentrant.
class Ast {
 public:
  Ast(std::vector<Node> nodes, int root, std::shared_ptr<const std::vector<std::string>> vars);

  int arity() const { return static_cast<int>(vars_->size()); }
  const std::vector<std::string>& variables() const { return *vars_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

  /// Throws InputError on arity mismatch, EvalDomainError on a domain
  /// violation or non-finite intermediate.
  double eval(const Eigen::VectorXd& x) const;

  /// Value and directional derivative along coordinate `seed`.
  Dual eval_dual(const Eigen::VectorXd& x, int seed) const;

  /// Fully parenthesized form; parses back to an equivalent tree.
  std::string to_string() const;

 private:
  std::vector<Node> nodes_;
  int root_;
  std::shared_ptr<const std::vector<std::string>> vars_;
};

/// Parses one or more components. Throws ParseError (with byte offset and
/// expected-token set) on syntax errors, unknown identifiers and function
/// arity mismatches.
std::vector<Ast> parse(std::string_view source, const std::vector<std::string>& variables);

/// Parses exactly one component.
Ast parse_scalar(std::string_view source, const std::vector<std::string>& variables);

Eigen::VectorXd eval(const std::vector<Ast>& components, const Eigen::VectorXd& x);

/// Jacobian by dual-number propagation, one seeded coordinate per pass.
Eigen::MatrixXd jacobian_ad(const std::vector<Ast>& components, const Eigen::VectorXd& x);

/// "(c1, c2)" for several components, the bare component otherwise.
std::string to_string(const std::vector<Ast>& components);

/// Identifiers in `source` that are neither function names nor "pi", in
/// order x, y, z, w first, then alphabetical. Used to infer a variable list.
std::vector<std::string> free_names(std::string_view source);

}  // namespace liftkit::expr
