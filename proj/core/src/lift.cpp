#include "liftkit/lift.hpp"

#include <algorithm>
#include <cmath>

#include "liftkit/errors.hpp"
#include "liftkit/linalg.hpp"

namespace liftkit {

void LiftOptions::validate() const {
  if (!(step_min > 0.0 && step_min <= step_init && step_init <= step_max))
    throw InputError("lift options need 0 < step_min <= step_init <= step_max");
  if (!(corrector_tol > 0.0)) throw InputError("corrector_tol must be positive");
  if (!(blowup_radius > 0.0)) throw InputError("blowup_radius must be positive");
  if (max_corrector_iter < 1) throw InputError("max_corrector_iter must be at least 1");
}

std::string Verdict::name() const {
  switch (kind) {
    case VerdictKind::Completed: return "Completed";
    case VerdictKind::FailedBlowUp: return "FailedBlowUp";
    case VerdictKind::FailedSingular: return "FailedSingular";
    case VerdictKind::FailedStall: return "FailedStall";
    case VerdictKind::FailedDomainExit: return "FailedDomainExit";
  }
  return "Unknown";
}

namespace {

enum Trigger { kNone = 0, kStall = 1, kBlowUp = 2, kSingular = 3, kDomain = 4 };

VerdictKind verdict_for(Trigger t) {
  switch (t) {
    case kDomain: return VerdictKind::FailedDomainExit;
    case kSingular: return VerdictKind::FailedSingular;
    case kBlowUp: return VerdictKind::FailedBlowUp;
    default: return VerdictKind::FailedStall;
  }
}

const char* kConservative =
    "engine-conservative: the lift is declared failed when the trace itself does not converge; a "
    "convergent subsequence alone is not detected";

}  // namespace

LiftTrace lift_path(const MapHandle& f, const Path& p, const Point& x0, LiftOptions opts) {
  opts.validate();
  if (!f.square()) throw InputError("lifting needs a square map, '" + f.name() + "' is not");
  if (p.space().dim() != f.codomain().dim()) throw InputError("path dimension does not match the codomain");
  const Space& dom = f.domain();
  const Space& cod = f.codomain();
  dom.check_dim(x0);
  if (!dom.contains(x0)) throw DomainError("start point outside the domain of '" + f.name() + "'");

  const double ta = p.t0(), tb = p.t1();
  auto target = [&](double s) { return p.eval(s >= 1.0 ? tb : ta + s * (tb - ta)); };

  LiftTrace trace;
  Point x = dom.canonical(x0);
  const double res0 = cod.difference(target(0.0), f.eval(x)).norm();
  if (res0 > opts.corrector_tol)
    throw InputError("start point residual " + std::to_string(res0) + " exceeds corrector_tol");
  double sigma = singular_summary(jacobian_at(f, x)).sigma_min;
  trace.nodes.push_back(LiftNode{0.0, x, res0, sigma, 0.0});
  if (sigma < opts.singular_threshold) {
    trace.verdict = Verdict{VerdictKind::FailedSingular, 0.0, x.norm(), sigma};
    trace.note = kConservative;
    return trace;
  }

  SolveOptions sopt;
  sopt.tol = opts.corrector_tol;
  sopt.max_iter = opts.max_corrector_iter;

  double s = 0.0;
  double h = opts.step_init;
  Point ys = target(0.0);
  for (long step = 0; step < opts.max_steps; ++step) {
    if (s >= 1.0) {
      trace.verdict = Verdict{VerdictKind::Completed, 1.0, x.norm(), sigma};
      return trace;
    }
    h = std::min(h, 1.0 - s);
    double sn = s + h;
    if (1.0 - sn < 1e-15) sn = 1.0;

    Trigger trig = kNone;
    SolveResult sol;
    Point yn;
    try {
      yn = target(sn);
      const Mat j = jacobian_at(f, x);
      const Vec dx = j.fullPivLu().solve(cod.difference(ys, yn));
      const Point xhat = dom.canonical(x + dx);
      if (!xhat.allFinite() || xhat.norm() > opts.blowup_radius) {
        trig = kBlowUp;
      } else if (!dom.contains(xhat)) {
        trig = kDomain;
      } else {
        sol = local_solve(f, yn, xhat, sopt);
        const double moved = dom.distance(xhat, sol.x);
        if (sol.x.norm() > opts.blowup_radius) {
          trig = kBlowUp;
        } else if (moved > 0.5 * dx.norm() + 1e-12 * (1.0 + x.norm())) {
          trig = kStall;  // corrector wandered: likely another sheet
        }
      }
    } catch (const DomainError&) {
      trig = kDomain;
    } catch (const EvalDomainError&) {
      trig = kDomain;
    } catch (const SingularityError&) {
      trig = kSingular;
    } catch (const ConvergenceError&) {
      trig = kStall;
    }

    if (trig == kNone) {
      sigma = singular_summary(jacobian_at(f, sol.x)).sigma_min;
      trace.lift_length += dom.distance(x, sol.x);
      x = sol.x;
      s = sn;
      ys = yn;
      trace.nodes.push_back(LiftNode{s, x, sol.residual, sigma, h});
      if (sigma < opts.singular_threshold) {
        trace.verdict = Verdict{VerdictKind::FailedSingular, s, x.norm(), sigma};
        trace.note = kConservative;
        return trace;
      }
      h = std::min(1.5 * h, opts.step_max);
      continue;
    }

    const double failed = h;
    h *= 0.5;
    if (h < opts.step_min) {
      trace.verdict = Verdict{verdict_for(trig), std::min(1.0, s + failed), x.norm(), sigma};
      trace.note = kConservative;
      return trace;
    }
  }
  trace.verdict = Verdict{VerdictKind::FailedStall, s, x.norm(), sigma};
  trace.note = std::string("step budget exhausted; ") + kConservative;
  return trace;
}

TraceAnalysis analyze_trace(const LiftTrace& trace, const Space& space, const std::optional<Weight>& weight,
                            const std::optional<Point>& anchor) {
  if (trace.nodes.size() < 2) throw InputError("trace analysis needs at least two nodes");
  TraceAnalysis out;
  out.verdict = trace.verdict;
  out.alpha_hat = trace.nodes.front().d_minus;
  for (const auto& n : trace.nodes) out.alpha_hat = std::min(out.alpha_hat, n.d_minus);
  if (weight) {
    const Point a = anchor ? *anchor : trace.nodes.front().x;
    double m = std::numeric_limits<double>::infinity();
    for (const auto& n : trace.nodes) m = std::min(m, n.d_minus * (*weight)(space.distance(n.x, a)));
    out.weighted_alpha_hat = m;
  }

  const double t_first = trace.nodes.front().t;
  const double t_last = trace.nodes.back().t;
  for (int j = 0; j <= 60; ++j) {
    const double t = t_last - (t_last - t_first) * std::ldexp(1.0, -j);
    auto it = std::lower_bound(trace.nodes.begin(), trace.nodes.end(), t,
                               [](const LiftNode& n, double v) { return n.t < v; });
    double diam = 0.0;
    for (auto a = it; a != trace.nodes.end(); ++a)
      for (auto b = a + 1; b != trace.nodes.end(); ++b) diam = std::max(diam, space.distance(a->x, b->x));
    out.tail_diameters.push_back(TailDiameter{t, diam});
    if (trace.nodes.end() - it <= 1) break;
  }
  return out;
}

}  // namespace liftkit
