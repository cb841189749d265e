#include "liftkit/hadamard.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "liftkit/errors.hpp"
#include "liftkit/linalg.hpp"
#include "liftkit/lowdisc.hpp"
#include "sphere_search.hpp"

namespace liftkit {

const char* to_string(DivergenceClass c) {
  switch (c) {
    case DivergenceClass::Divergent: return "divergent";
    case DivergenceClass::Convergent: return "convergent";
    case DivergenceClass::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> default_radii(const Point& x0, int count) {
  if (count < 2) throw InputError("need at least two radii");
  const double t_max = 100.0 * (1.0 + x0.norm());
  std::vector<double> r;
  for (int j = 0; j < count; ++j) r.push_back(t_max * std::pow(10.0, -3.0 + 3.0 * j / (count - 1)));
  return r;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double smallest_sv(const MapHandle& f, const Point& x) {
  try {
    if (!f.domain().contains(x)) return kNaN;
    return singular_summary(jacobian_at(f, x)).sigma_min;
  } catch (const Error&) {
    return kNaN;
  }
}

Point ball_point(const Space& s, const Point& x0, const Vec& v, double t) {
  const double n = v.norm();
  if (n == 0.0) return x0;
  const double unit = s.distance(x0, s.canonical(x0 + v / n * 1e-3)) / 1e-3;
  return s.canonical(x0 + v * (t / (unit > 0.0 ? unit : 1.0)));
}

}  // namespace

HadamardProfile ball_infimum_profile(const MapHandle& f, const Point& x0, std::vector<double> radii,
                                     ProfileBudget budget) {
  if (!f.square()) throw InputError("ball_infimum_profile needs a square map");
  const Space& dom = f.domain();
  dom.check_dim(x0);
  if (!dom.contains(x0)) throw DomainError("center outside the domain of '" + f.name() + "'");
  if (radii.empty()) radii = default_radii(x0);
  for (std::size_t j = 0; j < radii.size(); ++j)
    if (!(radii[j] > 0.0) || (j > 0 && !(radii[j] > radii[j - 1])))
      throw InputError("profile radii must be positive and increasing");

  const int n = dom.dim();
  const int m = budget.boundary_samples > 0 ? budget.boundary_samples : 64 * n;
  const auto dirs = sphere_directions(n, m);
  Halton halton(n, budget.seed);

  HadamardProfile prof;
  prof.x0 = x0;
  prof.radii = radii;
  prof.budget = budget;

  auto record = [&](const Point& x, double dm) {
    if (!std::isfinite(dm)) return;
    prof.samples.push_back(ProfileSample{x, dm, dom.distance(x0, x)});
    if (!(dm > 0.0)) prof.regular = false;
  };
  record(x0, smallest_sv(f, x0));

  for (double t : radii) {
    const std::size_t before = prof.samples.size();
    // Sphere of radius t.
    double best = std::numeric_limits<double>::infinity();
    Vec ubest;
    for (const auto& u : dirs) {
      const Point z = ball_point(dom, x0, u, t);
      const double dm = smallest_sv(f, z);
      record(z, dm);
      if (std::isfinite(dm) && dm < best) {
        best = dm;
        ubest = u;
      }
    }
    if (ubest.size() > 0 && n > 1) {
      auto g = [&](const Vec& u) { return smallest_sv(f, ball_point(dom, x0, u, t)); };
      double refined = best;
      const Vec u = detail::refine_direction(g, ubest, best, 2.0 * M_PI / m, false, &refined);
      record(ball_point(dom, x0, u, t), refined);
    }
    // Multistart compass descent inside the ball.
    int started = 0;
    for (int draw = 0; started < budget.starts && draw < 16 * budget.starts; ++draw) {
      const Vec v = 2.0 * halton.next().array() - 1.0;
      if (v.norm() > 1.0) continue;
      ++started;
      Point z = ball_point(dom, x0, v, t * v.norm());
      double val = smallest_sv(f, z);
      if (!std::isfinite(val)) continue;
      double delta = 0.25 * t;
      for (int it = 0; it < budget.descent_iters && delta > 1e-4 * t; ++it) {
        Point cand_best = z;
        double cand_val = val;
        for (int i = 0; i < n; ++i) {
          for (int sgn : {1, -1}) {
            Point c = z;
            c(i) += sgn * delta;
            c = dom.canonical(c);
            if (dom.distance(x0, c) > t) continue;
            const double cv = smallest_sv(f, c);
            if (std::isfinite(cv) && cv < cand_val) {
              cand_val = cv;
              cand_best = c;
            }
          }
        }
        if (cand_val < val) {
          z = cand_best;
          val = cand_val;
        } else {
          delta *= 0.5;
        }
      }
      record(z, val);
    }
    prof.samples_per_radius = std::max(prof.samples_per_radius, static_cast<int>(prof.samples.size() - before));
  }

  for (double t : radii) {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& s : prof.samples)
      if (s.distance <= t * (1.0 + 1e-9)) r = std::min(r, s.d_minus);
    if (!prof.infima.empty()) r = std::min(r, prof.infima.back());
    prof.infima.push_back(r);
  }
  double acc = radii[0] * prof.infima[0];
  prof.partial_integrals.push_back(acc);
  for (std::size_t j = 1; j < radii.size(); ++j) {
    acc += 0.5 * (prof.infima[j] + prof.infima[j - 1]) * (radii[j] - radii[j - 1]);
    prof.partial_integrals.push_back(acc);
  }
  return prof;
}

namespace {

// Least squares y = c + k x; returns (c, k, rms).
std::array<double, 3> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  const double k = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  const double c = (sy - k * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) ss += std::pow(y[i] - c - k * x[i], 2);
  return {c, k, std::sqrt(ss / n)};
}

const char* kCaveat =
    "sufficient condition only: a convergent or inconclusive Hadamard integral does not show that the map "
    "fails to be a covering projection (global homeomorphisms such as (x+y^3, y) violate the condition)";

}  // namespace

DivergenceReport classify_divergence(const HadamardProfile& profile) {
  const auto& t = profile.radii;
  const auto& r = profile.infima;
  if (t.size() < 8) throw InputError("classification needs at least 8 radii");
  if (t.back() / t.front() < std::pow(10.0, 1.5)) throw InputError("radii must span at least 1.5 decades");

  DivergenceReport rep;
  std::vector<double> lt, ly, tt;
  bool positive = true;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] < t.back() / 10.0 * (1.0 - 1e-12)) continue;
    if (!(r[j] > 0.0) || !std::isfinite(r[j])) {
      positive = false;
      continue;
    }
    tt.push_back(t[j]);
    lt.push_back(std::log(t[j]));
    ly.push_back(std::log(r[j]));
  }
  if (!positive || !profile.regular || tt.size() < 3) {
    rep.cls = DivergenceClass::Inconclusive;
    rep.best_model = "none";
    rep.caveat = std::string("profile not regular (D- = 0 sampled); ") + kCaveat;
    return rep;
  }

  const double width = tt.back() - tt.front();
  {
    double mean = 0;
    for (double v : ly) mean += v;
    mean /= static_cast<double>(ly.size());
    double ss = 0;
    for (double v : ly) ss += (v - mean) * (v - mean);
    rep.fits.push_back(ModelFit{"constant", std::sqrt(ss / static_cast<double>(ly.size())), {std::exp(mean)}, true, true});
  }
  {
    double c = 0;
    for (std::size_t i = 0; i < ly.size(); ++i) c += ly[i] + lt[i];
    c /= static_cast<double>(ly.size());
    double ss = 0;
    for (std::size_t i = 0; i < ly.size(); ++i) ss += std::pow(ly[i] - c + lt[i], 2);
    rep.fits.push_back(ModelFit{"inverse", std::sqrt(ss / static_cast<double>(ly.size())), {std::exp(c)}, true, true});
  }
  {
    const auto [c, k, rms] = linear_fit(lt, ly);
    const double gamma = -k;
    rep.fits.push_back(ModelFit{"power", rms, {std::exp(c), gamma}, gamma >= 1.1, false});
  }
  {
    const auto [c, k, rms] = linear_fit(tt, ly);
    const double beta = -k;
    rep.fits.push_back(ModelFit{"exponential", rms, {std::exp(c), beta}, beta * width >= 0.5, false});
  }

  const ModelFit* best = nullptr;
  for (const auto& fit : rep.fits)
    if (fit.admissible && (!best || fit.rms < best->rms - 1e-12)) best = &fit;
  rep.best_model = best ? best->model : "none";
  if (best && best->rms < rep.threshold)
    rep.cls = best->integral_diverges ? DivergenceClass::Divergent : DivergenceClass::Convergent;
  else
    rep.cls = DivergenceClass::Inconclusive;
  if (rep.cls != DivergenceClass::Divergent) rep.caveat = kCaveat;
  return rep;
}

WeightValidation validate_weight(const Weight& w, double t_max) {
  WeightValidation out;
  if (!(t_max > 0.0)) throw InputError("t_max must be positive");
  bool positive = true, monotone = true, evaluable = true;
  double prev = 0.0;
  const int grid = 4000;
  for (int i = 0; i <= grid; ++i) {
    const double t = t_max * i / grid;
    double v;
    try {
      v = w(t);
    } catch (const Error& e) {
      evaluable = false;
      out.reasons.push_back(std::string("evaluation failed at t = ") + std::to_string(t) + ": " + e.what());
      break;
    }
    if (!std::isfinite(v)) {
      evaluable = false;
      out.reasons.push_back("non-finite value at t = " + std::to_string(t));
      break;
    }
    if (!(v > 0.0) && positive) {
      positive = false;
      out.reasons.push_back("not positive at t = " + std::to_string(t));
    }
    if (i > 0 && v < prev - 1e-12 * std::abs(prev) && monotone) {
      monotone = false;
      out.reasons.push_back("decreasing near t = " + std::to_string(t));
    }
    prev = v;
  }

  out.divergence = w.divergence();
  if (out.divergence == Divergence::Unknown && evaluable && std::holds_alternative<ExpressionWeight>(w.family())) {
    // Tail comparison against affine growth on the last decade.
    const double lo = t_max / 10.0;
    const double ratio_lo = w(lo) / (1.0 + lo);
    const double ratio_hi = w(t_max) / (1.0 + t_max);
    const double slope = std::log(w(t_max) / w(lo)) / std::log(10.0);
    // Bounded ratio to 1 + t over the decade (log-slope under 0.05) counts as dominated.
    if (std::log(ratio_hi / ratio_lo) / std::log(10.0) <= 0.05) out.divergence = Divergence::Divergent;
    else if (slope > 1.1) out.divergence = Divergence::Convergent;
  }
  switch (out.divergence) {
    case Divergence::Divergent: break;
    case Divergence::Convergent: out.reasons.push_back("integral of 1/omega converges"); break;
    case Divergence::Unknown: out.reasons.push_back("divergence of the integral of 1/omega is unknown"); break;
  }
  out.ok = positive && monotone && evaluable && out.divergence == Divergence::Divergent;
  return out;
}

WeightCertificate weight_certificate(const MapHandle& f, const Point& x0, const Weight& w,
                                     const std::vector<Point>& samples) {
  const Space& dom = f.domain();
  dom.check_dim(x0);
  double t_max = 100.0;
  for (const auto& x : samples)
    if (dom.contains(x)) t_max = std::max(t_max, dom.distance(x, x0));
  const WeightValidation v = validate_weight(w, t_max);
  if (!v.ok) {
    std::string why;
    for (const auto& r : v.reasons) why += (why.empty() ? "" : "; ") + r;
    throw PreconditionError("not a weight: " + why);
  }
  WeightCertificate cert;
  cert.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& x : samples) {
    if (!dom.contains(x)) continue;
    const double dm = smallest_sv(f, x);
    if (!std::isfinite(dm)) continue;
    ++cert.n_samples;
    const double margin = dm * w(dom.distance(x, x0)) - 1.0;
    if (margin < cert.worst_margin) {
      cert.worst_margin = margin;
      cert.worst_point = x;
    }
  }
  if (cert.n_samples == 0) throw InputError("no admissible samples in the region");
  cert.pass = cert.worst_margin >= -1e-6;
  cert.hadamard_holds_on_region = cert.pass;
  return cert;
}

WeightCertificate weight_certificate(const MapHandle& f, const Point& x0, const Weight& w, const Region& region,
                                     int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InputError("n_samples must be positive");
  if (region.dim() != f.domain().dim()) throw InputError("region dimension does not match the domain");
  return weight_certificate(f, x0, w, region.sample(n_samples, seed));
}

Weight weight_from_profile(const HadamardProfile& profile, DivergenceClass cls) {
  std::vector<double> values;
  for (double r : profile.infima) {
    if (!(r > 0.0)) throw PreconditionError("profile has a zero infimum; reciprocal weight undefined");
    values.push_back(1.0 / r);
  }
  const Divergence d = cls == DivergenceClass::Divergent    ? Divergence::Divergent
                       : cls == DivergenceClass::Convergent ? Divergence::Convergent
                                                            : Divergence::Unknown;
  return Weight::tabulated(profile.radii, values, d);
}

}  // namespace liftkit
