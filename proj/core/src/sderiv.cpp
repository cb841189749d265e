#include "liftkit/sderiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liftkit/errors.hpp"
#include "liftkit/linalg.hpp"
#include "liftkit/lowdisc.hpp"
#include "sphere_search.hpp"

namespace liftkit {

const char* to_string(DerivMethod m) {
  return m == DerivMethod::JacobianSvd ? "jacobian_svd" : "shell_sampling";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Point at chart offset rho * u, scaled so that it sits at metric distance rho
// for normed flat spaces.
Point shell_point(const Space& s, const Point& x, const Vec& u, double rho) {
  const double h = 1e-3 * rho;
  const double unit = s.distance(x, s.canonical(x + u * h)) / h;
  const double scale = unit > 0.0 ? rho / unit : rho;
  return s.canonical(x + scale * u);
}

struct ShellSetup {
  double rho0 = 0.0;
  std::vector<Vec> dirs;
};

ShellSetup setup_shells(const MapHandle& f, const Point& x, const ShellOptions& opts) {
  const Space& dom = f.domain();
  ShellSetup s;
  s.rho0 = opts.rho0 > 0.0 ? opts.rho0 : 1e-2 * (1.0 + x.norm());
  s.dirs = sphere_directions(dom.dim(), std::max(2, opts.directions_per_dim * dom.dim()));
  for (int tries = 0; tries < 60; ++tries) {
    bool inside = true;
    for (const auto& u : s.dirs) {
      bool ok;
      try {
        ok = dom.contains(shell_point(dom, x, u, s.rho0));
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) {
        inside = false;
        break;
      }
    }
    if (inside) return s;
    s.rho0 *= 0.5;
  }
  throw DomainError("no admissible shell radius around the point inside the domain of '" + f.name() + "'");
}

double metric_ratio(const MapHandle& f, const Point& x, const Point& fx, const Vec& u, double rho) {
  const Space& dom = f.domain();
  Point z;
  try {
    z = shell_point(dom, x, u, rho);
  } catch (const Error&) {
    return kNaN;
  }
  if (!dom.contains(z)) return kNaN;
  const double d = dom.distance(x, z);
  if (!(d > 0.0)) return kNaN;
  return f.codomain().distance(fx, f.eval(z)) / d;
}

double initial_step(int dim, std::size_t count) {
  if (dim == 2) return 2.0 * M_PI / static_cast<double>(count);
  return 2.0 / std::pow(static_cast<double>(count), 1.0 / std::max(1, dim - 1));
}

}  // namespace

ScalarDerivEstimate scalar_derivatives(const MapHandle& f, const Point& x, DerivMethod method, ShellOptions opts) {
  f.domain().check_dim(x);
  if (!f.domain().contains(x)) throw DomainError("point outside the domain of '" + f.name() + "'");
  ScalarDerivEstimate est;
  est.method = method;
  if (method == DerivMethod::JacobianSvd) {
    const SingularSummary s = singular_summary(jacobian_at(f, x));
    est.d_plus = s.sigma_max;
    est.d_minus = s.sigma_min;
    return est;
  }

  const ShellSetup setup = setup_shells(f, x, opts);
  const Point fx = f.eval(x);
  const int dim = f.domain().dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::vector<std::pair<double, double>> tail;
  for (int k = 0; k <= opts.shells; ++k) {
    const double rho = setup.rho0 * std::ldexp(1.0, -k);
    ShellScale sc{rho, std::numeric_limits<double>::infinity(), 0.0};
    Vec umin, umax;
    for (const auto& u : setup.dirs) {
      double r;
      try {
        r = metric_ratio(f, x, fx, u, rho);
      } catch (const Error&) {
        continue;
      }
      if (!std::isfinite(r)) continue;
      if (r < sc.min_ratio) {
        sc.min_ratio = r;
        umin = u;
      }
      if (r > sc.max_ratio) {
        sc.max_ratio = r;
        umax = u;
      }
    }
    if (umin.size() == 0) continue;
    if (opts.refine && k + 2 > opts.shells) {
      auto g = [&](const Vec& u) { return metric_ratio(f, x, fx, u, rho); };
      const double step = initial_step(dim, setup.dirs.size());
      detail::refine_direction(g, umin, sc.min_ratio, step, false, &sc.min_ratio);
      detail::refine_direction(g, umax, sc.max_ratio, step, true, &sc.max_ratio);
    }
    est.scale_report.push_back(sc);
    if (k + 2 > opts.shells) {
      lo = std::min(lo, sc.min_ratio);
      hi = std::max(hi, sc.max_ratio);
      tail.emplace_back(sc.min_ratio, sc.max_ratio);
    }
  }
  if (tail.empty()) throw DomainError("no admissible shell samples around the point");
  est.d_minus = lo;
  est.d_plus = hi;
  if (tail.size() == 2) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-2 * std::max({std::abs(a), std::abs(b), 1e-300}); };
    est.stable = close(tail[0].first, tail[1].first) && close(tail[0].second, tail[1].second);
  }
  return est;
}

SurjectionEstimate surjection_constant(const MapHandle& f, const Point& x, std::vector<double> radii,
                                       ShellOptions opts) {
  f.domain().check_dim(x);
  if (!f.domain().contains(x)) throw DomainError("point outside the domain of '" + f.name() + "'");
  SurjectionEstimate est;
  if (f.codomain().dim() > f.domain().dim()) {
    est.dimension_shortcut = true;
    est.value = 0.0;
    return est;
  }
  const ShellSetup setup = setup_shells(f, x, opts);
  if (radii.empty())
    for (int k = 0; k <= opts.shells; ++k) radii.push_back(setup.rho0 * std::ldexp(1.0, -k));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  const Point fx = f.eval(x);
  const Space& dom = f.domain();
  const int dim = dom.dim();
  for (double t : radii) {
    if (!(t > 0.0)) throw InputError("surjection radii must be positive");
    auto g = [&](const Vec& u) {
      Point z;
      try {
        z = shell_point(dom, x, u, t);
      } catch (const Error&) {
        return kNaN;
      }
      if (!dom.contains(z)) return kNaN;
      return f.codomain().distance(fx, f.eval(z));
    };
    double best = std::numeric_limits<double>::infinity();
    Vec ubest;
    for (const auto& u : setup.dirs) {
      double v;
      try {
        v = g(u);
      } catch (const Error&) {
        continue;
      }
      if (std::isfinite(v) && v < best) {
        best = v;
        ubest = u;
      }
    }
    if (ubest.size() == 0) continue;
    detail::refine_direction(g, ubest, best, initial_step(dim, setup.dirs.size()), false, &best);
    est.radii_used.push_back(t);
    est.ratios.push_back(best / t);
  }
  if (est.ratios.empty()) throw DomainError("no admissible boundary samples for the surjection estimate");
  const std::size_t n = est.ratios.size();
  est.value = est.ratios[0];
  if (n >= 2) est.value = std::min(est.ratios[0], est.ratios[1]);
  return est;
}

}  // namespace liftkit
