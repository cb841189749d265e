#include "liftkit/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "liftkit/errors.hpp"

namespace liftkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double param_slack(double t0, double t1) { return 1e-12 * std::max({1.0, std::abs(t0), std::abs(t1)}); }

std::string fmt_point(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) os << ",";
    os << p[i];
  }
  os << ")";
  return os.str();
}

// Index i with params[i] <= t <= params[i+1]; params has at least two entries.
std::size_t locate(const std::vector<double>& params, double t) {
  auto it = std::upper_bound(params.begin(), params.end(), t);
  std::size_t i = it == params.begin() ? 0 : static_cast<std::size_t>(it - params.begin()) - 1;
  return std::min(i, params.size() - 2);
}

}  // namespace

Path::Path(Kind kind, Space space, double t0, double t1)
    : kind_(std::make_shared<const Kind>(std::move(kind))), space_(std::move(space)), t0_(t0), t1_(t1) {
  if (!(t0 <= t1) || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw InputError("path domain must be a finite interval with t0 <= t1");
  }
}

Path Path::segment(Point a, Point b, std::optional<Space> space) {
  Space sp = space ? *space : Space::euclidean(static_cast<int>(a.size()));
  sp.check_dim(a);
  sp.check_dim(b);
  return Path(SegmentPath{std::move(a), std::move(b)}, std::move(sp), 0.0, 1.0);
}

Path Path::polyline(std::vector<Point> knots, std::optional<Space> space) {
  if (knots.size() < 2) throw InputError("polyline needs at least two knots");
  std::vector<double> params(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    params[i] = static_cast<double>(i) / static_cast<double>(knots.size() - 1);
  }
  Path p = sampled(std::move(params), std::move(knots), std::move(space));
  auto kind = std::get<SampledPath>(*p.kind_);
  kind.polyline = true;
  return Path(std::move(kind), p.space_, 0.0, 1.0);
}

Path Path::sampled(std::vector<double> params, std::vector<Point> knots, std::optional<Space> space) {
  if (knots.empty() || knots.size() != params.size()) {
    throw InputError("sampled path needs matching, non-empty parameter and knot lists");
  }
  for (std::size_t i = 1; i < params.size(); ++i) {
    if (!(params[i] > params[i - 1])) throw InputError("sampled path parameters must be strictly increasing");
  }
  Space sp = space ? *space : Space::euclidean(static_cast<int>(knots.front().size()));
  for (auto& k : knots) {
    sp.check_dim(k);
    k = sp.canonical(k);
  }
  const double t0 = params.front();
  const double t1 = params.back();
  return Path(SampledPath{std::move(params), std::move(knots), false}, std::move(sp), t0, t1);
}

Path Path::loop(Point center, double radius, int winding) {
  if (center.size() != 2) throw InputError("loop paths are planar: center must have two coordinates");
  if (!(radius > 0.0)) throw InputError("loop radius must be positive");
  return Path(LoopPath{std::move(center), radius, winding}, Space::euclidean(2), 0.0, 1.0);
}

Path Path::expression(const std::string& text, double t0, double t1, const std::string& var,
                      std::optional<Space> space) {
  auto comps = expr::parse(text, {var});
  Space sp = space ? *space : Space::euclidean(static_cast<int>(comps.size()));
  if (sp.dim() != static_cast<int>(comps.size())) {
    throw InputError("expression path has " + std::to_string(comps.size()) + " components but the space has dimension " +
                     std::to_string(sp.dim()));
  }
  return Path(ExpressionPath{std::move(comps), text, 0.0, 1.0}, std::move(sp), t0, t1);
}

Path Path::callable(std::function<Point(double)> fn, double t0, double t1, Space space,
                    std::vector<double> breakpoints) {
  std::sort(breakpoints.begin(), breakpoints.end());
  return Path(CallablePath{std::move(fn), std::move(breakpoints)}, std::move(space), t0, t1);
}

Point Path::eval(double t) const {
  const double slack = param_slack(t0_, t1_);
  if (!(t >= t0_ - slack && t <= t1_ + slack)) {
    std::ostringstream os;
    os << "parameter " << t << " outside path domain [" << t0_ << ", " << t1_ << "]";
    throw InputError(os.str());
  }
  t = std::clamp(t, t0_, t1_);
  return std::visit(overloaded{
                        [&](const SegmentPath& s) { return space_.interpolate(s.a, s.b, t); },
                        [&](const SampledPath& s) {
                          if (s.knots.size() == 1) return s.knots.front();
                          const std::size_t i = locate(s.params, t);
                          const double lam = (t - s.params[i]) / (s.params[i + 1] - s.params[i]);
                          return space_.interpolate(s.knots[i], s.knots[i + 1], lam);
                        },
                        [&](const LoopPath& l) {
                          const double th = 2.0 * std::numbers::pi * l.winding * t;
                          Point p(2);
                          p << l.center[0] + l.radius * std::cos(th), l.center[1] + l.radius * std::sin(th);
                          return p;
                        },
                        [&](const ExpressionPath& e) {
                          Eigen::VectorXd arg(1);
                          arg[0] = e.offset + e.scale * t;
                          return space_.canonical(expr::eval(e.components, arg));
                        },
                        [&](const CallablePath& c) { return c.fn(t); },
                    },
                    *kind_);
}

Vec Path::velocity(double t) const {
  t = std::clamp(t, t0_, t1_);
  return std::visit(overloaded{
                        [&](const SegmentPath& s) { return Vec(space_.difference(s.a, s.b)); },
                        [&](const SampledPath& s) {
                          if (s.knots.size() == 1) return Vec(Vec::Zero(space_.dim()));
                          std::size_t i = locate(s.params, t);
                          if (t == s.params[i + 1] && i + 2 < s.params.size() && t < t1_) ++i;
                          return Vec(space_.difference(s.knots[i], s.knots[i + 1]) /
                                     (s.params[i + 1] - s.params[i]));
                        },
                        [&](const LoopPath& l) {
                          const double w = 2.0 * std::numbers::pi * l.winding;
                          Vec v(2);
                          v << -l.radius * w * std::sin(w * t), l.radius * w * std::cos(w * t);
                          return v;
                        },
                        [&](const ExpressionPath& e) {
                          Eigen::VectorXd arg(1);
                          arg[0] = e.offset + e.scale * t;
                          return Vec(e.scale * expr::jacobian_ad(e.components, arg).col(0));
                        },
                        [&](const CallablePath&) {
                          const double h = 1e-6 * std::max(t1_ - t0_, 1e-12);
                          const double lo = std::max(t0_, t - h);
                          const double hi = std::min(t1_, t + h);
                          if (hi <= lo) return Vec(Vec::Zero(space_.dim()));
                          return Vec(space_.difference(eval(lo), eval(hi)) / (hi - lo));
                        },
                    },
                    *kind_);
}

Path Path::restrict(double t, double s) const {
  const double slack = param_slack(t0_, t1_);
  if (!(t >= t0_ - slack && s <= t1_ + slack && t <= s)) {
    throw InputError("restriction interval must lie inside the path domain");
  }
  Path p = *this;
  p.t0_ = std::clamp(t, t0_, t1_);
  p.t1_ = std::clamp(s, p.t0_, t1_);
  return p;
}

std::vector<double> Path::breakpoints() const {
  std::vector<double> out;
  auto keep = [&](const std::vector<double>& src) {
    for (double b : src) {
      if (b > t0_ && b < t1_) out.push_back(b);
    }
  };
  if (const auto* s = std::get_if<SampledPath>(kind_.get())) keep(s->params);
  if (const auto* c = std::get_if<CallablePath>(kind_.get())) keep(c->breakpoints);
  return out;
}

bool Path::piecewise_linear() const {
  const bool linear_kind = std::holds_alternative<SegmentPath>(*kind_) || std::holds_alternative<SampledPath>(*kind_);
  return linear_kind && space_.is_flat();
}

std::string Path::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const SegmentPath& s) { os << "segment " << fmt_point(s.a) << " -> " << fmt_point(s.b); },
                 [&](const SampledPath& s) {
                   os << (s.polyline ? "polyline" : "sampled") << " with " << s.knots.size() << " knots";
                 },
                 [&](const LoopPath& l) {
                   os << "loop center " << fmt_point(l.center) << " radius " << l.radius << " winding " << l.winding;
                 },
                 [&](const ExpressionPath& e) { os << "expression " << e.text; },
                 [&](const CallablePath&) { os << "composed path"; },
             },
             *kind_);
  os << " on [" << t0_ << ", " << t1_ << "]";
  return os.str();
}

PathLengthResult path_length(const Path& p, double sub_t0, double sub_t1, LengthOptions opts) {
  if (!(opts.rel_tol > 0.0)) throw InputError("rel_tol must be positive");
  const Path q = p.restrict(sub_t0, sub_t1);
  PathLengthResult res;
  if (q.t0() == q.t1()) {
    res.converged = true;
    res.partitions_used = 1;
    res.approximants = {0.0};
    return res;
  }

  std::vector<double> edges{q.t0()};
  for (double b : q.breakpoints()) edges.push_back(b);
  edges.push_back(q.t1());

  const bool linear = q.piecewise_linear();
  const int min_k = linear ? 1 : 4;
  const Space& sp = q.space();

  for (int k = 0; k <= opts.k_max; ++k) {
    const long n = 1L << k;
    double sum = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double a = edges[e];
      const double b = edges[e + 1];
      Point prev = q.eval(a);
      for (long i = 1; i <= n; ++i) {
        const double t = i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
        Point cur = q.eval(t);
        sum += sp.distance(prev, cur);
        prev = std::move(cur);
      }
    }
    res.approximants.push_back(sum);
    res.partitions_used = n * static_cast<long>(edges.size() - 1);
    if (k >= min_k) {
      const double prev_sum = res.approximants[res.approximants.size() - 2];
      const double diff = sum - prev_sum;
      if (std::abs(diff) <= opts.rel_tol * sum || sum == 0.0) {
        res.converged = true;
        // Chord sums of a smooth arc err by O(h^2); one Richardson step.
        res.value = linear ? sum : sum + std::max(diff, 0.0) / 3.0;
        res.value = std::max(res.value, *std::max_element(res.approximants.begin(), res.approximants.end()));
        return res;
      }
    }
  }
  res.converged = false;
  res.value = *std::max_element(res.approximants.begin(), res.approximants.end());
  return res;
}

PathLengthResult path_length(const Path& p, LengthOptions opts) { return path_length(p, p.t0(), p.t1(), opts); }

LengthOracle::LengthOracle(Path p, LengthOptions opts) : path_(std::move(p)), opts_(opts) {
  if (!path_.piecewise_linear()) return;
  params_.push_back(path_.t0());
  for (double b : path_.breakpoints()) params_.push_back(b);
  params_.push_back(path_.t1());
  cumulative_.assign(params_.size(), 0.0);
  Point prev = path_.eval(params_.front());
  for (std::size_t i = 1; i < params_.size(); ++i) {
    Point cur = path_.eval(params_[i]);
    cumulative_[i] = cumulative_[i - 1] + path_.space().distance(prev, cur);
    prev = std::move(cur);
  }
}

double LengthOracle::length(double u, double v) const {
  if (u > v) std::swap(u, v);
  if (params_.empty()) {
    const auto r = path_length(path_, u, v, opts_);
    if (!r.converged) throw PreconditionError("path length did not converge: possibly non-rectifiable");
    return r.value;
  }
  if (params_.size() == 1 || u == v) return 0.0;
  auto cum = [&](double t) {
    t = std::clamp(t, params_.front(), params_.back());
    const std::size_t i = locate(params_, t);
    return cumulative_[i] + path_.space().distance(path_.eval(params_[i]), path_.eval(t));
  };
  return std::max(0.0, cum(v) - cum(u));
}

ArcLengthPath reparam_arclength(const Path& p, int n_knots, LengthOptions opts) {
  if (n_knots < 2) throw InputError("reparam_arclength needs at least two knots");
  const auto total = path_length(p, opts);
  if (!total.converged) {
    throw PreconditionError("cannot reparametrize by arc length: length did not converge (possibly non-rectifiable)");
  }
  const Space& sp = p.space();

  std::vector<double> ts;
  if (p.piecewise_linear()) {
    ts.push_back(p.t0());
    for (double b : p.breakpoints()) ts.push_back(b);
    ts.push_back(p.t1());
  } else {
    // Fine chord table, then invert cumulative length at evenly spaced targets.
    const int m = std::max(16 * n_knots, 4096);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) grid.push_back(p.t0() + (p.t1() - p.t0()) * i / m);
    for (double b : p.breakpoints()) grid.push_back(b);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> cum(grid.size(), 0.0);
    Point prev = p.eval(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
      Point cur = p.eval(grid[i]);
      cum[i] = cum[i - 1] + sp.distance(prev, cur);
      prev = std::move(cur);
    }
    const double lpoly = cum.back();
    ts.push_back(p.t0());
    if (lpoly > 0.0) {
      for (int j = 1; j < n_knots - 1; ++j) {
        const double target = lpoly * j / (n_knots - 1);
        auto it = std::lower_bound(cum.begin(), cum.end(), target);
        const std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - cum.begin()), 1, cum.size() - 1);
        const std::size_t lo = hi - 1;
        const double span = cum[hi] - cum[lo];
        const double lam = span > 0.0 ? (target - cum[lo]) / span : 0.0;
        ts.push_back(grid[lo] + lam * (grid[hi] - grid[lo]));
      }
    }
    for (double b : p.breakpoints()) ts.push_back(b);
    ts.push_back(p.t1());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }

  std::vector<Point> knots;
  std::vector<double> params;
  for (double t : ts) {
    Point x = p.eval(t);
    if (knots.empty()) {
      params.push_back(0.0);
      knots.push_back(std::move(x));
      continue;
    }
    const double d = sp.distance(knots.back(), x);
    if (d <= 0.0) continue;
    params.push_back(params.back() + d);
    knots.push_back(std::move(x));
  }

  ArcLengthPath out{Path::sampled(params, knots, sp), params.back(), false};
  out.degenerate = knots.size() == 1;
  return out;
}

Path reverse_path(const Path& p) {
  const double t0 = p.t0();
  const double t1 = p.t1();
  return std::visit(overloaded{
                        [&](const SegmentPath& s) -> Path {
                          if (t0 == 0.0 && t1 == 1.0) return Path::segment(s.b, s.a, p.space());
                          return Path::sampled({t0, t1}, {p.eval(t1), p.eval(t0)}, p.space());
                        },
                        [&](const SampledPath& s) -> Path {
                          std::vector<double> params;
                          std::vector<Point> knots;
                          params.push_back(t0);
                          knots.push_back(p.eval(t1));
                          for (std::size_t i = s.params.size(); i-- > 0;) {
                            if (s.params[i] > t0 && s.params[i] < t1) {
                              params.push_back(t0 + t1 - s.params[i]);
                              knots.push_back(s.knots[i]);
                            }
                          }
                          if (t1 > t0) {
                            params.push_back(t1);
                            knots.push_back(p.eval(t0));
                          }
                          Path r = Path::sampled(std::move(params), std::move(knots), p.space());
                          return r;
                        },
                        [&](const LoopPath& l) -> Path {
                          if (t0 == 0.0 && t1 == 1.0) return Path::loop(l.center, l.radius, -l.winding);
                          return Path::callable([p, t0, t1](double t) { return p.eval(t0 + t1 - t); }, t0, t1,
                                                p.space());
                        },
                        [&](const ExpressionPath& e) -> Path {
                          ExpressionPath flipped = e;
                          flipped.offset = e.offset + e.scale * (t0 + t1);
                          flipped.scale = -e.scale;
                          return Path(std::move(flipped), p.space(), t0, t1);
                        },
                        [&](const CallablePath& c) -> Path {
                          std::vector<double> bps;
                          for (double b : c.breakpoints) bps.push_back(t0 + t1 - b);
                          return Path::callable([p, t0, t1](double t) { return p.eval(t0 + t1 - t); }, t0, t1,
                                                p.space(), std::move(bps));
                        },
                    },
                    p.kind());
}

}  // namespace liftkit
