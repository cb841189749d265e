#include "liftkit/space.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "liftkit/errors.hpp"
#include "liftkit/expr.hpp"

namespace liftkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int kind_dim(const Space::Kind& k) {
  return std::visit(overloaded{
                        [](const Euclidean& e) { return e.dim; },
                        [](const CircleQuotient&) { return 1; },
                        [](const Torus& t) { return t.dim; },
                        [](const Product& p) {
                          int d = 0;
                          for (const auto& f : p.factors) d += f.dim();
                          return d;
                        },
                        [](const OpenSubset& o) { return o.base->dim(); },
                    },
                    k);
}

double p_norm(const Vec& v, double p) {
  if (std::isinf(p)) return v.lpNorm<Eigen::Infinity>();
  if (p == 1.0) return v.lpNorm<1>();
  if (p == 2.0) return v.norm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

double wrap_angle(double theta) {
  double r = std::fmod(theta + std::numbers::pi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= std::numbers::pi;
  // fmod rounding can land exactly on +pi
  if (r >= std::numbers::pi) r -= kTwoPi;
  return r;
}

bool same_point(const Point& a, const Point& b, double rel_tol) {
  if (a.size() != b.size()) return false;
  const double scale = std::max({1.0, a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>()});
  return (a - b).lpNorm<Eigen::Infinity>() <= rel_tol * scale;
}

Space::Space() : Space(Euclidean{1, 2.0}) {}

Space::Space(Kind kind) : kind_(std::move(kind)), dim_(kind_dim(kind_)) {
  if (dim_ < 1) throw InputError("space dimension must be positive");
  if (const auto* e = std::get_if<Euclidean>(&kind_)) {
    if (!(e->norm_p >= 1.0)) throw InputError("norm exponent must lie in [1, inf]");
  }
}

Space Space::euclidean(int dim, double norm_p) { return Space(Euclidean{dim, norm_p}); }
Space Space::circle() { return Space(CircleQuotient{}); }
Space Space::torus(int dim) { return Space(Torus{dim}); }
Space Space::product(std::vector<Space> factors) {
  if (factors.empty()) throw InputError("product space needs at least one factor");
  return Space(Product{std::move(factors)});
}

Space Space::open_subset(const Space& base, const std::string& predicate, std::vector<std::string> vars) {
  if (vars.empty()) {
    static const char* kNames[] = {"x", "y", "z", "w"};
    for (int i = 0; i < base.dim(); ++i) {
      vars.push_back(i < 4 ? std::string(kNames[i]) : "x" + std::to_string(i + 1));
    }
  }
  if (static_cast<int>(vars.size()) != base.dim()) {
    throw InputError("open subset predicate variable count does not match base dimension");
  }
  auto ast = std::make_shared<const expr::Ast>(expr::parse_scalar(predicate, vars));
  return Space(OpenSubset{std::make_shared<const Space>(base), std::move(ast), predicate});
}

std::string Space::describe() const {
  return std::visit(overloaded{
                        [](const Euclidean& e) {
                          std::ostringstream os;
                          os << "euclidean(" << e.dim << ",";
                          if (std::isinf(e.norm_p)) {
                            os << "inf";
                          } else {
                            os << e.norm_p;
                          }
                          os << ")";
                          return os.str();
                        },
                        [](const CircleQuotient&) { return std::string("circle"); },
                        [](const Torus& t) { return "torus(" + std::to_string(t.dim) + ")"; },
                        [](const Product& p) {
                          std::string s = "product(";
                          for (std::size_t i = 0; i < p.factors.size(); ++i) {
                            if (i) s += ",";
                            s += p.factors[i].describe();
                          }
                          return s + ")";
                        },
                        [](const OpenSubset& o) {
                          return "subset(" + o.base->describe() + ", " + o.predicate_text + " > 0)";
                        },
                    },
                    kind_);
}

void Space::check_dim(const Point& a) const {
  if (a.size() != dim_) {
    throw InputError("point has dimension " + std::to_string(a.size()) + ", space " + describe() +
                     " expects " + std::to_string(dim_));
  }
}

bool Space::contains(const Point& a) const {
  if (a.size() != dim_ || !a.allFinite()) return false;
  return std::visit(overloaded{
                        [&](const Product& p) {
                          Eigen::Index off = 0;
                          for (const auto& f : p.factors) {
                            if (!f.contains(a.segment(off, f.dim()))) return false;
                            off += f.dim();
                          }
                          return true;
                        },
                        [&](const OpenSubset& o) {
                          if (!o.base->contains(a)) return false;
                          try {
                            return o.predicate->eval(a) > 0.0;
                          } catch (const EvalDomainError&) {
                            return false;
                          }
                        },
                        [](const auto&) { return true; },
                    },
                    kind_);
}

Point Space::canonical(const Point& a) const {
  check_dim(a);
  return std::visit(overloaded{
                        [&](const CircleQuotient&) {
                          Point r = a;
                          r[0] = wrap_angle(a[0]);
                          return r;
                        },
                        [&](const Torus&) {
                          Point r = a;
                          for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = wrap_angle(a[i]);
                          return r;
                        },
                        [&](const Product& p) {
                          Point r(a.size());
                          Eigen::Index off = 0;
                          for (const auto& f : p.factors) {
                            r.segment(off, f.dim()) = f.canonical(a.segment(off, f.dim()));
                            off += f.dim();
                          }
                          return r;
                        },
                        [&](const OpenSubset& o) { return o.base->canonical(a); },
                        [&](const Euclidean&) { return Point(a); },
                    },
                    kind_);
}

Vec Space::difference(const Point& a, const Point& b) const {
  check_dim(a);
  check_dim(b);
  return std::visit(overloaded{
                        [&](const CircleQuotient&) {
                          Vec d(1);
                          d[0] = wrap_angle(b[0] - a[0]);
                          return d;
                        },
                        [&](const Torus&) {
                          Vec d(a.size());
                          for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = wrap_angle(b[i] - a[i]);
                          return d;
                        },
                        [&](const Product& p) {
                          Vec d(a.size());
                          Eigen::Index off = 0;
                          for (const auto& f : p.factors) {
                            d.segment(off, f.dim()) = f.difference(a.segment(off, f.dim()), b.segment(off, f.dim()));
                            off += f.dim();
                          }
                          return d;
                        },
                        [&](const OpenSubset& o) { return o.base->difference(a, b); },
                        [&](const Euclidean&) { return Vec(b - a); },
                    },
                    kind_);
}

Point Space::interpolate(const Point& a, const Point& b, double lambda) const {
  return canonical(a + lambda * difference(a, b));
}

double Space::raw_distance(const Point& a, const Point& b) const {
  return std::visit(overloaded{
                        [&](const Euclidean& e) { return p_norm(b - a, e.norm_p); },
                        [&](const CircleQuotient&) { return std::abs(wrap_angle(b[0] - a[0])); },
                        [&](const Torus&) { return difference(a, b).norm(); },
                        [&](const Product& p) {
                          double s = 0.0;
                          Eigen::Index off = 0;
                          for (const auto& f : p.factors) {
                            s += f.raw_distance(a.segment(off, f.dim()), b.segment(off, f.dim()));
                            off += f.dim();
                          }
                          return s;
                        },
                        [&](const OpenSubset& o) { return o.base->raw_distance(a, b); },
                    },
                    kind_);
}

double Space::distance(const Point& a, const Point& b) const {
  check_dim(a);
  check_dim(b);
  if (std::holds_alternative<OpenSubset>(kind_)) {
    if (!contains(a) || !contains(b)) throw DomainError("point outside " + describe());
  }
  return raw_distance(a, b);
}

bool Space::is_flat() const {
  return std::visit(overloaded{
                        [](const Product& p) {
                          return std::all_of(p.factors.begin(), p.factors.end(),
                                             [](const Space& f) { return f.is_flat(); });
                        },
                        [](const OpenSubset& o) { return o.base->is_flat(); },
                        [](const auto&) { return true; },
                    },
                    kind_);
}

namespace {

class SpaceParser {
 public:
  explicit SpaceParser(const std::string& s) : s_(s) {}

  Space parse_all() {
    Space sp = parse();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return sp;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("bad space descriptor '" + s_ + "': " + what);
  }
  std::string word() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '.' || s_[pos_] == '-' || s_[pos_] == '+')) {
      ++pos_;
    }
    if (b == pos_) fail("expected a name or number");
    return s_.substr(b, pos_ - b);
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  int integer() {
    const std::string w = word();
    try {
      return std::stoi(w);
    } catch (...) {
      fail("expected an integer, got '" + w + "'");
    }
  }
  double real() {
    const std::string w = word();
    if (w == "inf" || w == "infinity") return std::numeric_limits<double>::infinity();
    try {
      return std::stod(w);
    } catch (...) {
      fail("expected a number, got '" + w + "'");
    }
  }

  Space parse() {
    std::string name = word();
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    if (name == "euclidean" || name == "r") {
      if (!eat('(')) fail("euclidean needs (dim[,p])");
      const int d = integer();
      double p = 2.0;
      if (eat(',')) p = real();
      if (!eat(')')) fail("missing ')'");
      return Space::euclidean(d, p);
    }
    if (name == "circle") return Space::circle();
    if (name == "torus") {
      if (!eat('(')) fail("torus needs (dim)");
      const int d = integer();
      if (!eat(')')) fail("missing ')'");
      return Space::torus(d);
    }
    if (name == "product") {
      if (!eat('(')) fail("product needs (factor, ...)");
      std::vector<Space> fs{parse()};
      while (eat(',')) fs.push_back(parse());
      if (!eat(')')) fail("missing ')'");
      return Space::product(std::move(fs));
    }
    fail("unknown space kind '" + name + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Space parse_space(const std::string& text) { return SpaceParser(text).parse_all(); }

}  // namespace liftkit
