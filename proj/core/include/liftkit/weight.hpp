#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "liftkit/expr.hpp"

namespace liftkit {

enum class Divergence { Divergent, Convergent, Unknown };

const char* to_string(Divergence d);

struct ConstantWeight {
  double c = 1.0;
};

/// a + b t
struct AffineWeight {
  double a = 1.0;
  double b = 1.0;
};

/// a + b t^gamma
struct PowerWeight {
  double a = 1.0;
  double b = 1.0;
  double gamma = 1.0;
};

/// Expression in the variable t.
struct ExpressionWeight {
  std::shared_ptr<const expr::Ast> ast;
  std::string text;
};

/// Right-continuous step function: values[j] on (radii[j-1], radii[j]],
/// values.back() beyond the last radius. Divergence is supplied by the
/// caller (usually from a profile classification).
struct TabulatedWeight {
  std::vector<double> radii;
  std::vector<double> values;
  Divergence divergence = Divergence::Unknown;
};

/// A candidate weight omega: [0, inf) -> (0, inf). Immutable value type.
class Weight {
 public:
  using Family = std::variant<ConstantWeight, AffineWeight, PowerWeight, ExpressionWeight, TabulatedWeight>;

  explicit Weight(Family family);
  static Weight constant(double c);
  static Weight affine(double a, double b);
  static Weight power(double a, double b, double gamma);
  static Weight expression(const std::string& text);
  static Weight tabulated(std::vector<double> radii, std::vector<double> values, Divergence divergence);

  const Family& family() const { return family_; }

  double operator()(double t) const;

  /// Analytic status for closed families; Unknown for expressions.
  Divergence divergence() const;

  bool continuous() const;
  std::string describe() const;

 private:
  Family family_;
};

/// "const:1", "affine:1,1", "power:1,1,2", "expr:1+t" or "tab:r1,r2;v1,v2".
Weight parse_weight(const std::string& text);

/// Integral of 1/omega over [a, b] by adaptive Simpson.
double reciprocal_integral(const Weight& w, double a, double b, double tol = 1e-10);

}  // namespace liftkit
