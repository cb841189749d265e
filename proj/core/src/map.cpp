#include "liftkit/map.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <regex>

#include "liftkit/errors.hpp"
#include "liftkit/expr.hpp"
#include "liftkit/linalg.hpp"

namespace liftkit {

const char* to_string(JacobianMode mode) {
  switch (mode) {
    case JacobianMode::Analytic: return "analytic";
    case JacobianMode::Automatic: return "automatic";
    case JacobianMode::FiniteDifference: return "finite_difference";
  }
  return "unknown";
}

MapHandle::MapHandle(std::string name, Space domain, Space codomain, Evaluator f, JacobianFn jac, JacobianMode mode)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      f_(std::move(f)),
      jac_(std::move(jac)),
      mode_(mode) {
  if (!f_) throw InputError("map '" + name_ + "' has no evaluator");
  if (!jac_ && mode_ != JacobianMode::FiniteDifference)
    throw InputError("map '" + name_ + "' has no Jacobian");
}

Point MapHandle::eval(const Point& x) const {
  domain_.check_dim(x);
  if (!domain_.contains(x)) throw DomainError("point outside the domain of '" + name_ + "'");
  Vec y = f_(x);
  if (y.size() != codomain_.dim())
    throw InputError("map '" + name_ + "' produced a value of the wrong dimension");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (!std::isfinite(y(i))) throw EvalDomainError("non-finite value of '" + name_ + "'", Span{});
  return codomain_.canonical(y);
}

MapHandle MapHandle::with_finite_difference() const {
  MapHandle out = *this;
  out.mode_ = JacobianMode::FiniteDifference;
  return out;
}

namespace {

MapHandle make_builtin(const std::string& name, Space dom, Space cod, MapHandle::Evaluator f,
                       MapHandle::JacobianFn j) {
  return MapHandle(name, std::move(dom), std::move(cod), std::move(f), std::move(j), JacobianMode::Analytic);
}

MapHandle identity_map(int n) {
  return make_builtin(
      "identity(" + std::to_string(n) + ")", Space::euclidean(n), Space::euclidean(n),
      [](const Point& x) { return Vec(x); }, [n](const Point&) { return Mat(Mat::Identity(n, n)); });
}

MapHandle shear3() {
  return make_builtin(
      "shear3", Space::euclidean(2), Space::euclidean(2),
      [](const Point& p) {
        Vec v(2);
        v << p(0) + p(1) * p(1) * p(1), p(1);
        return v;
      },
      [](const Point& p) {
        Mat j(2, 2);
        j << 1.0, 3.0 * p(1) * p(1), 0.0, 1.0;
        return j;
      });
}

MapHandle shear3_inv() {
  return make_builtin(
      "shear3_inv", Space::euclidean(2), Space::euclidean(2),
      [](const Point& p) {
        Vec v(2);
        v << p(0) - p(1) * p(1) * p(1), p(1);
        return v;
      },
      [](const Point& p) {
        Mat j(2, 2);
        j << 1.0, -3.0 * p(1) * p(1), 0.0, 1.0;
        return j;
      });
}

MapHandle expmap() {
  return make_builtin(
      "expmap", Space::euclidean(1), Space::euclidean(1),
      [](const Point& p) { return Vec::Constant(1, std::exp(p(0))); },
      [](const Point& p) { return Mat::Constant(1, 1, std::exp(p(0))); });
}

MapHandle logmap() {
  return make_builtin(
      "logmap", Space::open_subset(Space::euclidean(1), "x"), Space::euclidean(1),
      [](const Point& p) { return Vec::Constant(1, std::log(p(0))); },
      [](const Point& p) { return Mat::Constant(1, 1, 1.0 / p(0)); });
}

MapHandle polar_exp() {
  return make_builtin(
      "polar_exp", Space::euclidean(2), Space::euclidean(2),
      [](const Point& p) {
        const double r = std::exp(p(0));
        Vec v(2);
        v << r * std::cos(p(1)), r * std::sin(p(1));
        return v;
      },
      [](const Point& p) {
        const double r = std::exp(p(0));
        const double c = r * std::cos(p(1));
        const double s = r * std::sin(p(1));
        Mat j(2, 2);
        j << c, -s, s, c;
        return j;
      });
}

std::complex<double> ipow(std::complex<double> z, int k) {
  std::complex<double> out(1.0, 0.0);
  const int n = k < 0 ? -k : k;
  for (int i = 0; i < n; ++i) out *= z;
  return k < 0 ? 1.0 / out : out;
}

MapHandle powk(int k) {
  Space annulus = Space::open_subset(Space::euclidean(2), "min(x^2+y^2-0.25, 4-x^2-y^2)");
  return make_builtin(
      "powk(" + std::to_string(k) + ")", annulus, Space::euclidean(2),
      [k](const Point& p) {
        const std::complex<double> w = ipow({p(0), p(1)}, k);
        Vec v(2);
        v << w.real(), w.imag();
        return v;
      },
      [k](const Point& p) {
        const std::complex<double> d = static_cast<double>(k) * ipow({p(0), p(1)}, k - 1);
        Mat j(2, 2);
        j << d.real(), -d.imag(), d.imag(), d.real();
        return j;
      });
}

MapHandle arctan() {
  return make_builtin(
      "arctan", Space::euclidean(1), Space::euclidean(1),
      [](const Point& p) { return Vec::Constant(1, std::atan(p(0))); },
      [](const Point& p) { return Mat::Constant(1, 1, 1.0 / (1.0 + p(0) * p(0))); });
}

MapHandle inclusion() {
  return make_builtin(
      "inclusion", Space::euclidean(1), Space::euclidean(2),
      [](const Point& p) {
        Vec v(2);
        v << p(0), 0.0;
        return v;
      },
      [](const Point&) {
        Mat j(2, 1);
        j << 1.0, 0.0;
        return j;
      });
}

MapHandle cubic_implicit() {
  return make_builtin(
      "cubic_implicit", Space::product({Space::euclidean(1), Space::euclidean(1)}), Space::euclidean(1),
      [](const Point& p) { return Vec::Constant(1, p(1) * p(1) * p(1) + p(1) - p(0)); },
      [](const Point& p) {
        Mat j(1, 2);
        j << -1.0, 3.0 * p(1) * p(1) + 1.0;
        return j;
      });
}

const std::vector<std::string>& plain_builtins() {
  static const std::vector<std::string> names = {"shear3", "shear3_inv", "expmap", "logmap", "polar_exp",
                                                 "arctan", "inclusion", "cubic_implicit"};
  return names;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int parse_int_param(const std::string& name, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t, &used);
  } catch (const std::exception&) {
    throw InputError(name + ": parameter '" + t + "' is not an integer");
  }
  if (used != t.size()) throw InputError(name + ": parameter '" + t + "' is not an integer");
  return v;
}

std::optional<MapHandle> try_builtin(const std::string& text) {
  static const std::regex call(R"(^([A-Za-z_][A-Za-z0-9_]*)\s*(\((.*)\))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, call)) return std::nullopt;
  const std::string name = m[1];
  const bool has_param = m[2].matched;
  const std::string param = m[3];
  if (name == "identity") {
    const int n = has_param ? parse_int_param(name, param) : 2;
    if (n < 1) throw InputError("identity: dimension must be positive");
    return identity_map(n);
  }
  if (name == "powk") {
    if (!has_param) throw InputError("powk: missing exponent, e.g. powk(2)");
    const int k = parse_int_param(name, param);
    if (k == 0) throw InputError("powk: k must be a nonzero integer");
    return powk(k);
  }
  for (const auto& b : plain_builtins()) {
    if (name != b) continue;
    if (has_param) throw InputError(name + " takes no parameters");
    if (name == "shear3") return shear3();
    if (name == "shear3_inv") return shear3_inv();
    if (name == "expmap") return expmap();
    if (name == "logmap") return logmap();
    if (name == "polar_exp") return polar_exp();
    if (name == "arctan") return arctan();
    if (name == "inclusion") return inclusion();
    if (name == "cubic_implicit") return cubic_implicit();
  }
  return std::nullopt;
}

// Split on `sep` at parenthesis depth zero.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> default_vars(int dim) {
  static const char* base[] = {"x", "y", "z", "w"};
  std::vector<std::string> v;
  for (int i = 0; i < dim; ++i) v.push_back(i < 4 ? base[i] : "x" + std::to_string(i + 1));
  return v;
}

MapHandle expression_map(const MapSpec& spec) {
  std::vector<std::string> vars = spec.vars;
  if (vars.empty()) {
    vars = expr::free_names(spec.text);
    if (vars.empty()) vars = default_vars(spec.domain ? spec.domain->dim() : 1);
  }
  auto comps = std::make_shared<const std::vector<expr::Ast>>(expr::parse(spec.text, vars));
  const int n = static_cast<int>(vars.size());
  const int m = static_cast<int>(comps->size());

  Space domain = spec.domain ? *spec.domain : Space::euclidean(n);
  if (domain.dim() != n)
    throw InputError("map has " + std::to_string(n) + " variables but the domain has dimension " +
                     std::to_string(domain.dim()));
  if (spec.domain_predicate) domain = Space::open_subset(domain, *spec.domain_predicate, vars);
  Space codomain = spec.codomain ? *spec.codomain : Space::euclidean(m);
  if (codomain.dim() != m)
    throw InputError("map has " + std::to_string(m) + " components but the codomain has dimension " +
                     std::to_string(codomain.dim()));

  MapHandle::Evaluator f = [comps](const Point& x) { return expr::eval(*comps, x); };
  MapHandle::JacobianFn jac = [comps](const Point& x) { return expr::jacobian_ad(*comps, x); };
  JacobianMode mode = JacobianMode::Automatic;

  if (spec.jacobian) {
    const auto rows = split_top(*spec.jacobian, ';');
    if (static_cast<int>(rows.size()) != m)
      throw InputError("jacobian has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(m));
    auto entries = std::make_shared<std::vector<expr::Ast>>();
    for (const auto& row : rows) {
      const auto cells = split_top(row, ',');
      if (static_cast<int>(cells.size()) != n)
        throw InputError("jacobian row '" + trim(row) + "' has " + std::to_string(cells.size()) +
                         " entries, expected " + std::to_string(n));
      for (const auto& c : cells) entries->push_back(expr::parse_scalar(trim(c), vars));
    }
    jac = [entries, m, n](const Point& x) {
      Mat j(m, n);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) j(r, c) = (*entries)[static_cast<std::size_t>(r * n + c)].eval(x);
      return j;
    };
    mode = JacobianMode::Analytic;
  }
  const std::string name = spec.name.empty() ? spec.text : spec.name;
  MapHandle h(name, domain, codomain, std::move(f), std::move(jac), mode);
  return spec.finite_difference ? h.with_finite_difference() : h;
}

}  // namespace

MapHandle resolve_map(const MapSpec& spec) {
  const std::string text = trim(spec.text);
  if (text.empty()) throw InputError("empty map specification");
  if (auto b = try_builtin(text)) {
    if (spec.domain && spec.domain->dim() != b->domain().dim())
      throw InputError(b->name() + ": domain dimension mismatch");
    if (spec.codomain && spec.codomain->dim() != b->codomain().dim())
      throw InputError(b->name() + ": codomain dimension mismatch");
    return spec.finite_difference ? b->with_finite_difference() : *b;
  }
  static const std::regex bare(R"(^[A-Za-z_][A-Za-z0-9_]*(\s*\(.*\))?$)");
  if (spec.vars.empty() && std::regex_match(text, bare)) {
    const std::string head = text.substr(0, text.find('('));
    const auto names = expr::free_names(text);
    const bool is_call = text.find('(') != std::string::npos;
    // "x" or "sin(x)" are expressions; "foo" and "foo(1)" are unknown maps.
    const bool known_var = !is_call && (head == "x" || head == "y" || head == "z" || head == "w");
    const bool known_func = is_call && std::find(names.begin(), names.end(), trim(head)) == names.end();
    if (!known_var && !known_func) throw InputError("unknown map '" + text + "'");
  }
  MapSpec s = spec;
  s.text = text;
  return expression_map(s);
}

MapHandle resolve_map(const std::string& text) {
  MapSpec s;
  s.text = text;
  return resolve_map(s);
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out = {"identity(n)", "powk(k)"};
  for (const auto& b : plain_builtins()) out.push_back(b);
  return out;
}

bool is_builtin(const std::string& text) {
  try {
    return try_builtin(trim(text)).has_value();
  } catch (const InputError&) {
    return false;
  }
}

std::optional<MapHandle> builtin_inverse(const MapHandle& f) {
  const std::string& n = f.name();
  if (n == "shear3") return shear3_inv();
  if (n == "shear3_inv") return shear3();
  if (n == "expmap") return logmap();
  if (n == "logmap") return expmap();
  if (n.rfind("identity(", 0) == 0) return f;
  return std::nullopt;
}

Mat finite_difference_jacobian(const MapHandle& f, const Point& x) {
  const Space& dom = f.domain();
  const Space& cod = f.codomain();
  const Point fx = f.eval(x);
  const int n = dom.dim();
  Mat j(cod.dim(), n);
  for (int i = 0; i < n; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
    Point xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    xp = dom.canonical(xp);
    xm = dom.canonical(xm);
    const bool okp = dom.contains(xp);
    const bool okm = dom.contains(xm);
    if (okp && okm) {
      j.col(i) = cod.difference(f.eval(xm), f.eval(xp)) / (2.0 * h);
    } else if (okp) {
      j.col(i) = cod.difference(fx, f.eval(xp)) / h;
    } else if (okm) {
      j.col(i) = cod.difference(f.eval(xm), fx) / h;
    } else {
      throw DomainError("finite-difference stencil leaves the domain of '" + f.name() + "'");
    }
  }
  return j;
}

Mat jacobian_at(const MapHandle& f, const Point& x) {
  if (f.jacobian_mode() == JacobianMode::FiniteDifference) return finite_difference_jacobian(f, x);
  f.domain().check_dim(x);
  if (!f.domain().contains(x)) throw DomainError("point outside the domain of '" + f.name() + "'");
  Mat j = f.exact_jacobian()(x);
  for (Eigen::Index i = 0; i < j.size(); ++i)
    if (!std::isfinite(j.data()[i])) throw EvalDomainError("non-finite Jacobian of '" + f.name() + "'", Span{});
  return j;
}

double residual_norm(const MapHandle& f, const Point& x, const Point& y) {
  return f.codomain().difference(y, f.eval(x)).norm();
}

SolveResult local_solve(const MapHandle& f, const Point& y, const Point& x_guess, SolveOptions opts) {
  if (!f.square()) throw InputError("local_solve needs a square system, '" + f.name() + "' is not");
  f.codomain().check_dim(y);
  const Space& dom = f.domain();
  Point x = dom.canonical(x_guess);
  if (!dom.contains(x)) throw DomainError("initial guess outside the domain of '" + f.name() + "'");

  Vec r = f.codomain().difference(y, f.eval(x));
  double rn = r.norm();
  for (int it = 0;; ++it) {
    const Mat j = jacobian_at(f, x);
    Eigen::JacobiSVD<Mat> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (rn <= opts.tol) return SolveResult{x, it, rn, smin};
    if (!(smax > 0.0) || smin < 1e-14 * smax) throw SingularityError("singular Jacobian in local_solve", smin);
    if (it >= opts.max_iter) throw ConvergenceError("local_solve: no convergence in " + std::to_string(it) + " iterations");

    const Vec dx = -svd.solve(r);
    double lambda = 1.0;
    bool accepted = false;
    bool any_inside = false;
    for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
      const Point xn = dom.canonical(x + lambda * dx);
      if (!dom.contains(xn)) continue;
      any_inside = true;
      try {
        const Vec rnew = f.codomain().difference(y, f.eval(xn));
        const double nn = rnew.norm();
        if (nn < rn) {
          x = xn;
          r = rnew;
          rn = nn;
          accepted = true;
          break;
        }
      } catch (const EvalDomainError&) {
      }
    }
    if (!accepted) {
      if (!any_inside) throw DomainError("Newton iterates leave the domain of '" + f.name() + "'");
      throw ConvergenceError("local_solve: line search stalled at residual " + std::to_string(rn));
    }
  }
}

}  // namespace liftkit
