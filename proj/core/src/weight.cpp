#include "liftkit/weight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "liftkit/errors.hpp"

namespace liftkit {

const char* to_string(Divergence d) {
  switch (d) {
    case Divergence::Divergent: return "divergent";
    case Divergence::Convergent: return "convergent";
    case Divergence::Unknown: return "unknown";
  }
  return "unknown";
}

Weight::Weight(Family family) : family_(std::move(family)) {}

Weight Weight::constant(double c) { return Weight(ConstantWeight{c}); }
Weight Weight::affine(double a, double b) { return Weight(AffineWeight{a, b}); }
Weight Weight::power(double a, double b, double gamma) { return Weight(PowerWeight{a, b, gamma}); }

Weight Weight::expression(const std::string& text) {
  auto ast = std::make_shared<const expr::Ast>(expr::parse_scalar(text, {"t"}));
  return Weight(ExpressionWeight{std::move(ast), text});
}

Weight Weight::tabulated(std::vector<double> radii, std::vector<double> values, Divergence divergence) {
  if (radii.empty() || radii.size() != values.size())
    throw InputError("tabulated weight needs matching, nonempty radii and values");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw InputError("tabulated weight radii must increase");
  return Weight(TabulatedWeight{std::move(radii), std::move(values), divergence});
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

double Weight::operator()(double t) const {
  return std::visit(overloaded{[](const ConstantWeight& w) { return w.c; },
                               [t](const AffineWeight& w) { return w.a + w.b * t; },
                               [t](const PowerWeight& w) { return w.a + w.b * std::pow(t, w.gamma); },
                               [t](const ExpressionWeight& w) {
                                 Eigen::VectorXd x(1);
                                 x << t;
                                 return w.ast->eval(x);
                               },
                               [t](const TabulatedWeight& w) {
                                 auto it = std::lower_bound(w.radii.begin(), w.radii.end(), t);
                                 if (it == w.radii.end()) return w.values.back();
                                 return w.values[static_cast<std::size_t>(it - w.radii.begin())];
                               }},
                    family_);
}

Divergence Weight::divergence() const {
  return std::visit(overloaded{[](const ConstantWeight&) { return Divergence::Divergent; },
                               [](const AffineWeight&) { return Divergence::Divergent; },
                               [](const PowerWeight& w) {
                                 if (w.b == 0.0 || w.gamma <= 1.0) return Divergence::Divergent;
                                 return Divergence::Convergent;
                               },
                               [](const ExpressionWeight&) { return Divergence::Unknown; },
                               [](const TabulatedWeight& w) { return w.divergence; }},
                    family_);
}

bool Weight::continuous() const { return !std::holds_alternative<TabulatedWeight>(family_); }

std::string Weight::describe() const {
  return std::visit(overloaded{[](const ConstantWeight& w) { return "const:" + num(w.c); },
                               [](const AffineWeight& w) { return "affine:" + num(w.a) + "," + num(w.b); },
                               [](const PowerWeight& w) {
                                 return "power:" + num(w.a) + "," + num(w.b) + "," + num(w.gamma);
                               },
                               [](const ExpressionWeight& w) { return "expr:" + w.text; },
                               [](const TabulatedWeight& w) {
                                 return "tabulated(" + std::to_string(w.radii.size()) + " steps)";
                               }},
                    family_);
}

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw InputError(what + ": '" + tok + "' is not a number");
    }
    if (tok.find_first_not_of(" \t", used) != std::string::npos)
      throw InputError(what + ": '" + tok + "' is not a number");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Weight parse_weight(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw InputError("weight '" + text + "' must look like affine:1,1 or expr:1+t");
  const std::string fam = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (fam == "expr") return Weight::expression(body);
  if (fam == "tab") {
    const auto semi = body.find(';');
    if (semi == std::string::npos) throw InputError("tabulated weight needs radii;values");
    return Weight::tabulated(parse_numbers(body.substr(0, semi), "weight"),
                             parse_numbers(body.substr(semi + 1), "weight"), Divergence::Unknown);
  }
  const auto v = parse_numbers(body, "weight");
  if (fam == "const" && v.size() == 1) return Weight::constant(v[0]);
  if (fam == "affine" && v.size() == 2) return Weight::affine(v[0], v[1]);
  if (fam == "power" && v.size() == 3) return Weight::power(v[0], v[1], v[2]);
  throw InputError("weight '" + text + "': unknown family or wrong parameter count");
}

double reciprocal_integral(const Weight& w, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (a > b) return -reciprocal_integral(w, b, a, tol);
  auto g = [&](double t) { return 1.0 / w(t); };
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int depth) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = g(lm), frm = g(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
          return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, depth - 1) + rec(mid, hi, fmid, frm, fhi, right, depth - 1);
      };
  const double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, 40);
}

}  // namespace liftkit
