#include "liftkit/globalinv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liftkit/errors.hpp"
#include "liftkit/linalg.hpp"

namespace liftkit {

const char* to_string(FiberMethod m) { return m == FiberMethod::Multistart ? "multistart" : "loop_orbit"; }

InvertResult invert_at(const MapHandle& f, const Point& y, const Point& x0, LiftOptions opts) {
  f.codomain().check_dim(y);
  const Point y0 = f.eval(x0);
  const Path seg = Path::segment(y0, f.codomain().canonical(y), f.codomain());
  InvertResult out;
  out.trace = lift_path(f, seg, x0, opts);
  if (out.trace.verdict.completed()) out.x = out.trace.endpoint();
  return out;
}

namespace {

bool lex_less(const Point& a, const Point& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

const char* kDisclaimer =
    "best-effort enumeration from deterministic multistart seeds; preimages outside the seed region or "
    "basin may be missing";

}  // namespace

FiberReport fiber_enumerate(const MapHandle& f, const Point& y, const Region& seeds, int n_starts,
                            SolveOptions opts, std::uint64_t seed) {
  if (!f.square()) throw InputError("fiber enumeration needs a square map");
  if (n_starts < 1) throw InputError("n_starts must be positive");
  if (seeds.dim() != f.domain().dim()) throw InputError("seed region dimension does not match the domain");
  f.codomain().check_dim(y);
  FiberReport rep;
  rep.target = y;
  rep.method = FiberMethod::Multistart;
  rep.disclaimer = kDisclaimer;
  for (const auto& s : seeds.sample(n_starts, seed)) {
    ++rep.starts_used;
    if (!f.domain().contains(s)) continue;
    SolveResult sol;
    try {
      sol = local_solve(f, y, s, opts);
    } catch (const Error&) {
      continue;
    }
    const Point x = f.domain().canonical(sol.x);
    const bool dup = std::any_of(rep.preimages.begin(), rep.preimages.end(),
                                 [&](const Preimage& p) { return same_point(p.x, x); });
    if (!dup) rep.preimages.push_back(Preimage{x, sol.residual});
  }
  std::sort(rep.preimages.begin(), rep.preimages.end(),
            [](const Preimage& a, const Preimage& b) { return lex_less(a.x, b.x); });
  return rep;
}

FiberReport sheet_count(const MapHandle& f, const Point& y, const Path& loop, const Point& x_start, int max_orbit,
                        LiftOptions opts) {
  if (max_orbit < 1) throw InputError("max_orbit must be positive");
  const Space& cod = f.codomain();
  cod.check_dim(y);
  if (!same_point(cod.canonical(loop.eval(loop.t0())), cod.canonical(y), 1e-9) ||
      !same_point(cod.canonical(loop.eval(loop.t1())), cod.canonical(y), 1e-9))
    throw InputError("loop must start and end at the target point");

  FiberReport rep;
  rep.target = y;
  rep.method = FiberMethod::LoopOrbit;
  rep.disclaimer = "orbit of the starting point under the loop action; other orbits are not explored";
  const double r0 = residual_norm(f, x_start, y);
  rep.preimages.push_back(Preimage{f.domain().canonical(x_start), r0});

  Monodromy mono;
  Point x = rep.preimages.front().x;
  for (int k = 0; k < max_orbit; ++k) {
    const LiftTrace tr = lift_path(f, loop, x, opts);
    if (!tr.verdict.completed()) {
      rep.failure = tr.verdict;
      break;
    }
    x = tr.endpoint();
    int hit = -1;
    for (std::size_t i = 0; i < rep.preimages.size(); ++i)
      if (same_point(rep.preimages[i].x, x)) hit = static_cast<int>(i);
    if (hit >= 0) {
      mono.closed = true;
      mono.orbit_size = static_cast<int>(rep.preimages.size()) - hit;
      const int n = static_cast<int>(rep.preimages.size());
      for (int i = 0; i < n; ++i) mono.permutation.push_back(i + 1 < n ? i + 1 : hit);
      break;
    }
    rep.preimages.push_back(Preimage{x, tr.nodes.back().residual});
  }
  if (!mono.closed) {
    mono.orbit_size = static_cast<int>(rep.preimages.size());
    if (rep.preimages.size() >= 3) {
      const Vec d0 = f.domain().difference(rep.preimages[0].x, rep.preimages[1].x);
      bool constant = d0.norm() > 1e-6;
      for (std::size_t i = 1; constant && i + 1 < rep.preimages.size(); ++i) {
        const Vec di = f.domain().difference(rep.preimages[i].x, rep.preimages[i + 1].x);
        constant = (di - d0).lpNorm<Eigen::Infinity>() <= 1e-6;
      }
      if (constant) mono.translation = d0;
    }
  }
  rep.monodromy = mono;
  return rep;
}

QIBounds quasi_isometry_bounds(const MapHandle& f, const Region& region, int n_samples,
                               const std::optional<Region>& compact_k, std::uint64_t seed) {
  if (n_samples < 1) throw InputError("n_samples must be positive");
  if (region.dim() != f.domain().dim()) throw InputError("region dimension does not match the domain");
  if (compact_k && compact_k->dim() != f.codomain().dim())
    throw InputError("K dimension does not match the codomain");
  QIBounds out;
  out.alpha_hat = std::numeric_limits<double>::infinity();
  double alpha_k = std::numeric_limits<double>::infinity();
  for (const auto& x : region.sample(n_samples, seed)) {
    if (!f.domain().contains(x)) continue;
    SingularSummary s;
    try {
      s = singular_summary(jacobian_at(f, x));
    } catch (const Error&) {
      continue;
    }
    ++out.n_samples;
    out.alpha_hat = std::min(out.alpha_hat, s.sigma_min);
    out.beta_hat = std::max(out.beta_hat, s.sigma_max);
    if (compact_k && compact_k->contains(f.eval(x))) {
      ++out.n_in_k;
      alpha_k = std::min(alpha_k, s.sigma_min);
    }
  }
  if (out.n_samples == 0) throw InputError("no admissible samples in the region");
  if (out.n_in_k > 0) out.alpha_k = alpha_k;
  return out;
}

}  // namespace liftkit
