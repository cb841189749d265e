#include "liftkit/meanvalue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liftkit/errors.hpp"
#include "liftkit/linalg.hpp"

namespace liftkit {

const char* to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }

Path compose(const MapHandle& f, const Path& q) {
  return Path::callable([f, q](double t) { return f.eval(q.eval(t)); }, q.t0(), q.t1(), f.codomain(),
                        q.breakpoints());
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ratio evaluator shared by the slack, bisection and certificate code.
class Ratios {
 public:
  Ratios(const MapHandle& f, const Path& q, Direction dir, LengthOptions opts)
      : f_(f), q_(q), p_(compose(f, q)), dir_(dir), opts_(opts), q_len_(q, opts) {}

  double operator()(double u, double v) const {
    if (dir_ == Direction::Upper) {
      const double len = q_len_.length(u, v);
      if (!(len > 0.0))
        throw PreconditionError("zero-length piece of q on [" + std::to_string(u) + ", " + std::to_string(v) +
                                "]; reparametrize by arc length first");
      return f_.codomain().distance(p_.eval(u), p_.eval(v)) / len;
    }
    const double dq = q_.space().distance(q_.eval(u), q_.eval(v));
    if (!(dq > 0.0)) return kInf;
    const PathLengthResult lp = path_length(p_, u, v, opts_);
    if (!lp.converged) throw PreconditionError("f o q is not rectifiable on the requested piece");
    return lp.value / dq;
  }

 private:
  const MapHandle& f_;
  const Path& q_;
  Path p_;
  Direction dir_;
  LengthOptions opts_;
  LengthOracle q_len_;
};

}  // namespace

double split_inequality_slack(const MapHandle& f, const Path& q, double t, Direction dir, LengthOptions opts) {
  const double a = q.t0(), b = q.t1();
  if (!(t > a && t < b)) throw InputError("split point must lie strictly inside the path domain");
  const Ratios ratio(f, q, dir, opts);
  const double whole = ratio(a, b);
  const double left = ratio(a, t);
  const double right = ratio(t, b);
  if (dir == Direction::Upper) return std::max(left, right) - whole;
  const double lo = std::min(left, right);
  if (std::isinf(lo) && std::isinf(whole)) return 0.0;
  return whole - lo;
}

BisectionCertificate find_tau(const MapHandle& f, const Path& q, Direction dir, double tol_t, LengthOptions opts) {
  if (!(tol_t > 0.0)) throw InputError("tol_t must be positive");
  const double a = q.t0(), b = q.t1();
  if (!(b > a)) throw PreconditionError("degenerate path domain");
  if (dir == Direction::Lower && !(q.space().distance(q.eval(a), q.eval(b)) > 0.0))
    throw PreconditionError("lower mean-value form needs q(a) != q(b)");
  if (dir == Direction::Upper && !(LengthOracle(q, opts).length(a, b) > 0.0))
    throw PreconditionError("q has zero length");

  const Ratios ratio(f, q, dir, opts);
  BisectionCertificate cert;
  cert.direction = dir;
  cert.global_ratio = ratio(a, b);
  cert.intervals.emplace_back(a, b);
  cert.ratios.push_back(cert.global_ratio);

  double lo = a, hi = b;
  for (int depth = 0; depth < 60 && hi - lo >= tol_t; ++depth) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double rl = ratio(lo, mid);
    const double rr = ratio(mid, hi);
    const bool go_right = dir == Direction::Upper ? rr > rl : rr < rl;
    if (go_right) {
      lo = mid;
      cert.ratios.push_back(rr);
    } else {
      hi = mid;
      cert.ratios.push_back(rl);
    }
    cert.intervals.emplace_back(lo, hi);
  }
  cert.tau = 0.5 * (lo + hi);

  const SingularSummary s = singular_summary(jacobian_at(f, q.eval(cert.tau)));
  if (dir == Direction::Upper) {
    cert.derivative_at_tau = s.sigma_max;
    cert.final_slack = cert.derivative_at_tau - cert.global_ratio;
    cert.satisfied = cert.global_ratio <= 1.05 * cert.derivative_at_tau + 1e-12;
  } else {
    cert.derivative_at_tau = s.sigma_min;
    cert.final_slack = cert.global_ratio - cert.derivative_at_tau;
    cert.satisfied = cert.global_ratio >= 0.95 * cert.derivative_at_tau - 1e-12;
  }
  return cert;
}

LengthBoundsReport length_bounds_report(const MapHandle& f, const Path& q, int samples, LengthOptions opts) {
  if (samples < 2) throw InputError("length_bounds_report needs at least 2 samples");
  LengthBoundsReport rep;
  std::vector<double> ts;
  for (int i = 0; i < samples; ++i)
    ts.push_back(q.t0() + (q.t1() - q.t0()) * static_cast<double>(i) / (samples - 1));
  for (double t : q.breakpoints()) ts.push_back(t);
  rep.samples = static_cast<int>(ts.size());

  rep.sup_d_plus = 0.0;
  rep.inf_d_minus = kInf;
  for (double t : ts) {
    const SingularSummary s = singular_summary(jacobian_at(f, q.eval(t)));
    rep.sup_d_plus = std::max(rep.sup_d_plus, s.sigma_max);
    rep.inf_d_minus = std::min(rep.inf_d_minus, s.sigma_min);
  }

  rep.length_q = LengthOracle(q, opts).length(q.t0(), q.t1());
  const PathLengthResult lp = path_length(compose(f, q), opts);
  if (!lp.converged) throw PreconditionError("f o q is not rectifiable");
  rep.length_p = lp.value;

  rep.upper.lhs = rep.length_p;
  rep.upper.rhs = rep.sup_d_plus * rep.length_q;
  rep.upper.pass = rep.upper.lhs <= 1.05 * rep.upper.rhs + 1e-12;

  rep.lower.lhs = rep.length_p;
  if (!(rep.inf_d_minus > 0.0) || !std::isfinite(rep.sup_d_plus)) {
    rep.lower.skipped = true;
    rep.lower.pass = true;
    rep.lower.note = "sampled inf D- is 0 or sup D+ is infinite; lower bound hypothesis fails";
  } else {
    rep.lower.rhs = rep.inf_d_minus * rep.length_q;
    rep.lower.pass = rep.lower.lhs >= 0.95 * rep.lower.rhs - 1e-12;
  }
  rep.upper.note = "extremes sampled at " + std::to_string(rep.samples) + " points of Im q";
  if (rep.lower.note.empty()) rep.lower.note = rep.upper.note;
  return rep;
}

}  // namespace liftkit
