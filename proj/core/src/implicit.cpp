#include "liftkit/implicit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "liftkit/errors.hpp"
#include "liftkit/linalg.hpp"

namespace liftkit {

const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::NoWeight: return "no_weight";
    case BoundStatus::Holds: return "holds";
    case BoundStatus::Violated: return "violated";
    case BoundStatus::NotApplicable: return "not_applicable";
  }
  return "no_weight";
}

ImplicitProblem ImplicitProblem::make(MapHandle f, int x_dim, Point w) {
  const int total = f.domain().dim();
  const int n = f.codomain().dim();
  if (x_dim < 1 || x_dim >= total) throw InputError("x_dim must split the domain into nonempty x and y blocks");
  if (total - x_dim != n)
    throw InputError("y block has dimension " + std::to_string(total - x_dim) + " but the codomain has " +
                     std::to_string(n));
  if (w.size() != n) throw InputError("w must have the codomain dimension");
  ImplicitProblem p{std::move(f), x_dim, n, std::move(w)};
  return p;
}

Point ImplicitProblem::join(const Point& x, const Point& y) const {
  if (x.size() != x_dim || y.size() != y_dim) throw InputError("x or y has the wrong dimension");
  Point z(x_dim + y_dim);
  z << x, y;
  return z;
}

void ImplicitProblem::blocks(const Point& x, const Point& y, Mat* dx, Mat* dy) const {
  const Mat j = jacobian_at(f, join(x, y));
  if (dx) *dx = j.leftCols(x_dim);
  if (dy) *dy = j.rightCols(y_dim);
}

double ImplicitProblem::residual(const Point& x, const Point& y) const {
  return f.codomain().difference(w, f.eval(join(x, y))).norm();
}

namespace {

struct YProjection {
  Point y;
  double residual = 0.0;
};

// y-only damped Newton on f(x, .) = w; stops at rounding level or stagnation.
YProjection project_y(const ImplicitProblem& prob, const Point& x, Point y, int max_iter) {
  double r = prob.residual(x, y);
  const double floor = 1e-14 * (1.0 + prob.w.norm());
  for (int it = 0; it < max_iter && r > floor; ++it) {
    Mat dy;
    prob.blocks(x, y, nullptr, &dy);
    const Vec res = prob.f.codomain().difference(prob.w, prob.f.eval(prob.join(x, y)));
    const Vec step = -dy.fullPivLu().solve(res);
    if (!step.allFinite()) break;
    bool improved = false;
    for (double lam = 1.0; lam > 1e-6; lam *= 0.5) {
      const Point cand = y + lam * step;
      double rc;
      try {
        rc = prob.residual(x, cand);
      } catch (const Error&) {
        continue;
      }
      if (rc < r) {
        y = cand;
        r = rc;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {y, r};
}

struct NodeData {
  double sigma = 0.0;
  double monitor = 0.0;
};

NodeData node_data(const ImplicitProblem& prob, const Point& x, const Point& y) {
  Mat dx, dy;
  prob.blocks(x, y, &dx, &dy);
  NodeData d;
  d.sigma = singular_summary(dy).sigma_min;
  const double ndx = singular_summary(dx).sigma_max;
  d.monitor = d.sigma > 0.0 ? ndx / d.sigma : std::numeric_limits<double>::infinity();
  return d;
}

// Augmented Newton on (s, y): f(P(s), y) = w and det d_y f = 0, started near
// the stall point. Returns true and fills s, y on success.
template <class XOf>
bool locate_fold(const ImplicitProblem& prob, XOf x_of, double s_lo, double* s, Point* y,
                 const ImplicitOptions& opts) {
  const int n = prob.y_dim;
  auto eqs = [&](double ss, const Point& yy) {
    Vec g(n + 1);
    g.head(n) = prob.f.codomain().difference(prob.w, prob.f.eval(prob.join(x_of(ss), yy)));
    Mat dy;
    prob.blocks(x_of(ss), yy, nullptr, &dy);
    g(n) = dy.determinant();
    return g;
  };
  double ss = *s;
  Point yy = *y;
  try {
    for (int it = 0; it < 60; ++it) {
      const Vec g = eqs(ss, yy);
      if (g.head(n).norm() <= 1e-14 * (1.0 + prob.w.norm()) && std::abs(g(n)) <= 1e-14) break;
      Mat jac(n + 1, n + 1);
      const double hs = 1e-8;
      const double s_plus = std::min(1.0, ss + hs), s_minus = std::max(0.0, ss - hs);
      jac.col(0) = (eqs(s_plus, yy) - eqs(s_minus, yy)) / (s_plus - s_minus);
      for (int i = 0; i < n; ++i) {
        const double hy = 1e-7 * (1.0 + std::abs(yy(i)));
        Point yp = yy, ym = yy;
        yp(i) += hy;
        ym(i) -= hy;
        jac.col(i + 1) = (eqs(ss, yp) - eqs(ss, ym)) / (2.0 * hy);
      }
      const Vec dz = -jac.fullPivLu().solve(g);
      if (!dz.allFinite()) return false;
      ss = std::clamp(ss + dz(0), s_lo, 1.0);
      yy += dz.tail(n);
      if (dz.norm() <= 1e-15 * (1.0 + yy.norm())) break;
    }
  } catch (const Error&) {
    return false;
  }
  // Final y-only polish at the fold parameter keeps the node residual honest.
  const YProjection pr = project_y(prob, x_of(ss), yy, opts.newton_max_iter);
  if (!(pr.residual <= opts.tol)) return false;
  if (std::abs(ss - *s) > 1e-3 || (pr.y - *y).norm() > 0.1 * (1.0 + y->norm())) return false;
  *s = ss;
  *y = pr.y;
  return true;
}

}  // namespace

ImplicitTrace davidenko_lift(const ImplicitProblem& prob, const Path& p, const Point& y0,
                             const std::optional<Weight>& weight, ImplicitOptions opts) {
  if (!(opts.step_min > 0.0 && opts.step_min <= opts.step_init && opts.step_init <= opts.step_max))
    throw InputError("implicit options need 0 < step_min <= step_init <= step_max");
  if (p.dim() != prob.x_dim) throw InputError("x-path dimension does not match the x block");
  if (y0.size() != prob.y_dim) throw InputError("y0 has the wrong dimension");

  const double ta = p.t0(), tb = p.t1();
  auto param = [&](double s) { return s >= 1.0 ? tb : ta + s * (tb - ta); };
  auto x_of = [&](double s) { return p.eval(param(s)); };
  auto v_of = [&](double s) { return Vec(p.velocity(param(s)) * (tb - ta)); };
  const LengthOracle x_len(p);

  auto rhs = [&](double s, const Point& y) -> Vec {
    Mat dx, dy;
    const Point x = x_of(s);
    prob.blocks(x, y, &dx, &dy);
    const SingularSummary sv = singular_summary(dy);
    if (!(sv.sigma_max > 0.0) || sv.sigma_min < 1e-14 * sv.sigma_max)
      throw SingularityError("d_y f singular along the continuation", sv.sigma_min);
    const Vec out = -dy.fullPivLu().solve(dx * v_of(s));
    if (!out.allFinite()) throw SingularityError("non-finite Davidenko slope", sv.sigma_min);
    return out;
  };
  auto rk4 = [&](double s, const Point& y, double h) -> Point {
    const Vec k1 = rhs(s, y);
    const Vec k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1);
    const Vec k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2);
    const Vec k4 = rhs(std::min(1.0, s + h), y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  ImplicitTrace tr;
  const double res0 = prob.residual(x_of(0.0), y0);
  if (res0 > opts.tol) throw InputError("start residual " + std::to_string(res0) + " exceeds tol");

  const bool have_weight = weight.has_value();
  bool hypothesis_ok = true;
  bool bound_ok = true;
  const double y0_norm = y0.norm();
  if (have_weight && !weight->continuous())
    tr.note = "weight is not continuous; the a priori bound is only claimed for continuous weights";

  auto push = [&](double s, const Point& y, double res, double step) {
    const Point x = x_of(s);
    const NodeData nd = node_data(prob, x, y);
    ImplicitNode node{s, x, y, res, nd.monitor, nd.sigma, std::nullopt, step};
    if (have_weight) {
      const double integral = reciprocal_integral(*weight, y0_norm, y.norm());
      node.weight_integral = integral;
      if (!(nd.monitor <= (*weight)(y.norm()) * (1.0 + 1e-12))) hypothesis_ok = false;
      if (integral > x_len.length(ta, param(s)) + 1e-6) bound_ok = false;
    }
    tr.nodes.push_back(std::move(node));
    return nd.sigma;
  };
  auto finish = [&](Verdict v) {
    tr.verdict = v;
    if (!have_weight) tr.bound_status = BoundStatus::NoWeight;
    else if (!hypothesis_ok || !weight->continuous()) tr.bound_status = BoundStatus::NotApplicable;
    else tr.bound_status = bound_ok ? BoundStatus::Holds : BoundStatus::Violated;
    return tr;
  };

  double sigma = push(0.0, y0, res0, 0.0);
  if (sigma < opts.singular_threshold)
    return finish(Verdict{VerdictKind::FailedSingular, 0.0, y0.norm(), sigma});

  double s = 0.0;
  double h = opts.step_init;
  Point y = y0;
  for (long step = 0; step < opts.max_steps; ++step) {
    if (s >= 1.0) return finish(Verdict{VerdictKind::Completed, 1.0, y.norm(), sigma});
    h = std::min(h, 1.0 - s);
    double sn = s + h;
    if (1.0 - sn < 1e-15) sn = 1.0;
    const double hh = sn - s;

    double factor = 0.5;
    bool accepted = false;
    YProjection proj;
    try {
      const Point y_full = rk4(s, y, hh);
      const Point y_half = rk4(s + 0.5 * hh, rk4(s, y, 0.5 * hh), 0.5 * hh);
      const double err = (y_half - y_full).norm() / 15.0;
      const double scale = opts.ode_tol * (1.0 + y.norm());
      factor = err > 0.0 ? std::clamp(0.9 * std::pow(scale / err, 0.2), 0.2, 2.0) : 2.0;
      if (err <= scale) {
        const Point y_pred = y_half + (y_half - y_full) / 15.0;
        proj = project_y(prob, x_of(sn), y_pred, opts.newton_max_iter);
        const double moved = (proj.y - y_pred).norm();
        accepted = proj.residual <= opts.tol && moved <= std::max(100.0 * scale, 0.25 * (y_pred - y).norm());
      } else {
        factor = std::min(factor, 0.5);
      }
    } catch (const Error&) {
      factor = 0.5;
    }

    if (accepted) {
      s = sn;
      y = proj.y;
      sigma = push(s, y, proj.residual, hh);
      if (sigma < opts.singular_threshold) {
        tr.fold_x = x_of(s);
        tr.fold_y = y;
        return finish(Verdict{VerdictKind::FailedSingular, s, y.norm(), sigma});
      }
      if (y.norm() > opts.blowup_radius) return finish(Verdict{VerdictKind::FailedBlowUp, s, y.norm(), sigma});
      h = std::min(hh * std::max(1.0, factor), opts.step_max);
      continue;
    }
    h = hh * std::min(factor, 0.5);
    if (h < opts.step_min) {
      double sf = s;
      Point yf = y;
      if (locate_fold(prob, x_of, s, &sf, &yf, opts)) {
        const double res = prob.residual(x_of(sf), yf);
        if (sf > s) sigma = push(sf, yf, res, sf - s);
        else sigma = node_data(prob, x_of(sf), yf).sigma;
        if (sigma < opts.singular_threshold) {
          tr.fold_x = x_of(sf);
          tr.fold_y = yf;
          tr.note += (tr.note.empty() ? "" : "; ") + std::string("fold located: d_y f singular");
          return finish(Verdict{VerdictKind::FailedSingular, std::min(1.0, sf), yf.norm(), sigma});
        }
      }
      return finish(Verdict{VerdictKind::FailedStall, std::min(1.0, s + hh), y.norm(), sigma});
    }
  }
  tr.note += (tr.note.empty() ? "" : "; ") + std::string("step budget exhausted");
  return finish(Verdict{VerdictKind::FailedStall, s, y.norm(), sigma});
}

ImplicitResult implicit_eval(const ImplicitProblem& prob, const Point& x_target, const Point& x0, const Point& y0,
                             ImplicitOptions opts) {
  ImplicitResult out;
  out.trace = davidenko_lift(prob, Path::segment(x0, x_target), y0, std::nullopt, opts);
  if (out.trace.verdict.completed()) out.y = out.trace.endpoint();
  return out;
}

namespace {

std::vector<Point> section_solutions(const ImplicitProblem& prob, const Point& x, const std::vector<Point>& seeds,
                                     const ImplicitOptions& opts) {
  std::vector<Point> sols;
  for (const auto& s : seeds) {
    YProjection pr;
    try {
      pr = project_y(prob, x, s, 200);
    } catch (const Error&) {
      continue;
    }
    if (!(pr.residual <= opts.tol)) continue;
    try {
      if (node_data(prob, x, pr.y).sigma < opts.singular_threshold) continue;
    } catch (const Error&) {
      continue;
    }
    if (std::none_of(sols.begin(), sols.end(), [&](const Point& q) { return same_point(q, pr.y, 1e-6); }))
      sols.push_back(pr.y);
  }
  std::sort(sols.begin(), sols.end(), [](const Point& a, const Point& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return sols;
}

}  // namespace

BranchProbe branch_probe(const ImplicitProblem& prob, const std::vector<Point>& x_grid, const Region& y_seeds,
                         int n_starts, ImplicitOptions opts, std::uint64_t seed) {
  if (x_grid.empty()) throw InputError("branch_probe needs a nonempty x grid");
  if (y_seeds.dim() != prob.y_dim) throw InputError("seed region dimension does not match the y block");
  if (n_starts < 1) throw InputError("n_starts must be positive");
  const auto seeds = y_seeds.sample(n_starts, seed);

  std::vector<std::vector<Point>> sols;
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (const auto& x : x_grid) {
    if (x.size() != prob.x_dim) throw InputError("grid point has the wrong dimension");
    offset.push_back(total);
    sols.push_back(section_solutions(prob, x, seeds, opts));
    total += sols.back().size();
  }
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto link = [&](std::size_t g_from, std::size_t g_to) {
    for (std::size_t i = 0; i < sols[g_from].size(); ++i) {
      ImplicitTrace tr;
      try {
        tr = davidenko_lift(prob, Path::segment(x_grid[g_from], x_grid[g_to]), sols[g_from][i], std::nullopt, opts);
      } catch (const Error&) {
        continue;
      }
      if (!tr.verdict.completed()) continue;
      for (std::size_t j = 0; j < sols[g_to].size(); ++j) {
        if (same_point(tr.endpoint(), sols[g_to][j], 1e-6)) {
          parent[find(offset[g_from] + i)] = find(offset[g_to] + j);
          break;
        }
      }
    }
  };
  for (std::size_t g = 0; g + 1 < x_grid.size(); ++g) {
    link(g, g + 1);
    link(g + 1, g);
  }

  BranchProbe out;
  std::vector<std::size_t> roots;
  for (std::size_t g = 0; g < x_grid.size(); ++g) {
    for (std::size_t i = 0; i < sols[g].size(); ++i) {
      const std::size_t r = find(offset[g] + i);
      auto it = std::find(roots.begin(), roots.end(), r);
      std::size_t k = static_cast<std::size_t>(it - roots.begin());
      if (it == roots.end()) {
        roots.push_back(r);
        out.groups.emplace_back();
      }
      out.groups[k].members.emplace_back(x_grid[g], sols[g][i]);
    }
  }
  out.count = static_cast<int>(out.groups.size());
  out.label = "heuristic: lower bound on the number of continuation components of Z_w met by the grid";
  return out;
}

MapHandle projection_lift_map(const ImplicitProblem& prob) {
  const int m = prob.x_dim, n = prob.y_dim;
  const MapHandle f = prob.f;
  MapHandle::Evaluator g = [f, m, n](const Point& z) {
    Vec out(m + n);
    out << z.head(m), f.eval(z);
    return out;
  };
  MapHandle::JacobianFn jac = [f, m, n](const Point& z) {
    Mat j = Mat::Zero(m + n, m + n);
    j.topLeftCorner(m, m).setIdentity();
    j.bottomRows(n) = jacobian_at(f, z);
    return j;
  };
  return MapHandle("projection(" + f.name() + ")", f.domain(), Space::euclidean(m + n), std::move(g),
                   std::move(jac), JacobianMode::Analytic);
}

}  // namespace liftkit
