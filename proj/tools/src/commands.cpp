#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liftkit/errors.hpp"
#include "liftkit/globalinv.hpp"
#include "liftkit/hadamard.hpp"
#include "liftkit/implicit.hpp"
#include "liftkit/meanvalue.hpp"
#include "liftkit/sderiv.hpp"

namespace liftkit::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing required option ") + flag);
}

MapHandle lookup_map(const Context& c, const std::string& ref, const std::string& vars = "") {
  require(ref, "--map");
  if (vars.empty()) return c.registry.map(ref);
  MapSpec s;
  s.text = ref;
  s.vars = split(vars, ',');
  return resolve_map(s);
}

Point point_arg(const std::string& text, int dim, const char* flag) {
  require(text, flag);
  return parse_point(text, dim);
}

Region region_or_box(const std::string& text, const Point& center, double half) {
  if (!text.empty()) return parse_region(text);
  return Region::box(center.array() - half, center.array() + half);
}

json base_inputs(const Context& c) {
  json in = json::object();
  if (!c.registry_file.empty()) in["registry"] = c.registry_file;
  return in;
}

json map_json(const MapHandle& f) {
  return {{"name", f.name()},
          {"domain", f.domain().describe()},
          {"codomain", f.codomain().describe()},
          {"jacobian", to_string(f.jacobian_mode())}};
}

LiftOptions lift_options(const Context& c) {
  LiftOptions o;
  if (c.tol) o.corrector_tol = *c.tol;
  return o;
}

json lift_tolerances(const LiftOptions& o) {
  return {{"corrector_tol", o.corrector_tol}, {"step_init", o.step_init},
          {"step_min", o.step_min},           {"step_max", o.step_max},
          {"blowup_radius", o.blowup_radius}, {"singular_threshold", o.singular_threshold}};
}

json trace_summary(const LiftTrace& tr) {
  double worst = 0.0;
  for (const auto& n : tr.nodes) worst = std::max(worst, n.residual);
  json j = {{"nodes", tr.nodes.size()}, {"lift_length", tr.lift_length}, {"max_residual", worst},
            {"endpoint", to_json(tr.endpoint())}};
  if (!tr.note.empty()) j["note"] = tr.note;
  return j;
}

json weight_validation_json(const WeightValidation& v) {
  return {{"ok", v.ok}, {"divergence", to_string(v.divergence)}, {"reasons", v.reasons}};
}

json certificate_json(const WeightCertificate& c) {
  return {{"pass", c.pass},
          {"worst_margin", c.worst_margin},
          {"worst_point", to_json(c.worst_point)},
          {"n_samples", c.n_samples},
          {"hadamard_holds_on_region", c.hadamard_holds_on_region}};
}

}  // namespace

Report cmd_deriv(const Context& c, const DerivArgs& a) {
  Report r;
  r.command = "deriv";
  const MapHandle f = lookup_map(c, a.map);
  const Point x = point_arg(a.at, f.domain().dim(), "--at");
  DerivMethod method;
  if (a.method == "svd") method = DerivMethod::JacobianSvd;
  else if (a.method == "shell") method = DerivMethod::ShellSampling;
  else throw InputError("--method must be svd or shell");
  ShellOptions so;
  so.shells = a.shells;
  so.directions_per_dim = a.directions;
  if (so.shells < 1 || so.directions_per_dim < 1) throw InputError("--shells and --directions must be positive");

  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(f);
  r.inputs["at"] = to_json(x);
  r.inputs["method"] = a.method;

  const auto est = scalar_derivatives(f, x, method, so);
  r.results["d_minus"] = est.d_minus;
  r.results["d_plus"] = est.d_plus;
  r.results["method"] = to_string(est.method);
  if (method == DerivMethod::ShellSampling) {
    json scales = json::array();
    for (const auto& s : est.scale_report)
      scales.push_back({{"radius", s.radius}, {"min_ratio", s.min_ratio}, {"max_ratio", s.max_ratio}});
    r.results["scales"] = scales;
    r.results["stable"] = est.stable;
    r.tolerances = {{"shells", so.shells}, {"directions_per_dim", so.directions_per_dim}, {"refine", so.refine}};
  } else {
    r.tolerances = {{"jacobian", to_string(f.jacobian_mode())}};
  }
  if (a.surjection) {
    const auto s = surjection_constant(f, x, {}, so);
    r.results["surjection"] = {{"value", s.value},
                               {"radii", s.radii_used},
                               {"ratios", s.ratios},
                               {"dimension_shortcut", s.dimension_shortcut}};
    r.tolerances["surjection_shells"] = so.shells;
    r.tolerances["surjection_directions_per_dim"] = so.directions_per_dim;
  }
  r.verdicts["regular"] = est.d_minus > 0.0 && std::isfinite(est.d_plus);
  return r;
}

Report cmd_length(const Context& c, const LengthArgs& a) {
  Report r;
  r.command = "length";
  require(a.path, "--path");
  Path q = c.registry.path(a.path, a.dim);
  r.inputs = base_inputs(c);
  r.inputs["path"] = q.describe();
  if (!a.map.empty()) {
    const MapHandle f = lookup_map(c, a.map);
    if (f.domain().dim() != q.dim()) throw InputError("path dimension does not match the map domain");
    r.inputs["map"] = map_json(f);
    q = compose(f, q);
  }
  LengthOptions lo;
  if (c.tol) lo.rel_tol = *c.tol;
  const double u = a.from.empty() ? q.t0() : parse_numbers(a.from).at(0);
  const double v = a.to.empty() ? q.t1() : parse_numbers(a.to).at(0);
  r.inputs["interval"] = {u, v};
  const auto len = path_length(q, u, v, lo);
  r.results["length"] = len.value;
  r.results["converged"] = len.converged;
  r.results["partitions_used"] = len.partitions_used;
  r.results["approximants"] = len.approximants;
  r.tolerances = {{"rel_tol", lo.rel_tol}, {"k_max", lo.k_max}};
  r.verdicts["length"] = len.converged ? "converged" : "not_converged";
  if (a.reparam > 1) {
    const auto arc = reparam_arclength(q, std::max(1025, a.reparam), lo);
    r.results["arclength_total"] = arc.length;
    std::vector<std::string> header{"s"};
    for (int i = 0; i < q.dim(); ++i) header.push_back("x_" + std::to_string(i + 1));
    Csv csv(header);
    for (int k = 0; k < a.reparam; ++k) {
      const double s = arc.length * k / (a.reparam - 1);
      const Point p = arc.path.eval(s);
      std::vector<double> row{s};
      for (int i = 0; i < q.dim(); ++i) row.push_back(p[i]);
      csv.row(row);
    }
    r.files.emplace_back("arclength.csv", csv.str());
    r.tolerances["reparam_knots"] = a.reparam;
  }
  r.exit_code = len.converged ? 0 : 1;
  return r;
}

Report cmd_meanvalue(const Context& c, const MeanValueArgs& a) {
  Report r;
  r.command = "meanvalue";
  const MapHandle f = lookup_map(c, a.map);
  require(a.path, "--path");
  const Path q = c.registry.path(a.path, f.domain().dim());
  std::vector<Direction> dirs;
  if (a.direction == "upper" || a.direction == "both") dirs.push_back(Direction::Upper);
  if (a.direction == "lower" || a.direction == "both") dirs.push_back(Direction::Lower);
  if (dirs.empty()) throw InputError("--direction must be upper, lower or both");
  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(f);
  r.inputs["path"] = q.describe();
  r.inputs["direction"] = a.direction;
  const double tol_t = c.tol.value_or(1e-9);
  bool ok = true;

  Csv csv({"direction", "depth", "a", "b", "ratio"});
  json certs = json::object();
  for (Direction d : dirs) {
    try {
      const auto cert = find_tau(f, q, d, tol_t);
      certs[to_string(d)] = {{"tau", cert.tau},
                             {"point", to_json(q.eval(cert.tau))},
                             {"global_ratio", cert.global_ratio},
                             {"derivative_at_tau", cert.derivative_at_tau},
                             {"final_slack", cert.final_slack},
                             {"depth", cert.intervals.size()},
                             {"satisfied", cert.satisfied}};
      r.verdicts[std::string(to_string(d)) + "_certificate"] = cert.satisfied ? "satisfied" : "unsatisfied";
      ok = ok && cert.satisfied;
      for (std::size_t i = 0; i < cert.intervals.size(); ++i)
        csv.row({d == Direction::Upper ? 0.0 : 1.0, static_cast<double>(i), cert.intervals[i].first,
                 cert.intervals[i].second, cert.ratios[i]});
    } catch (const PreconditionError& e) {
      certs[to_string(d)] = {{"error", e.what()}};
      r.verdicts[std::string(to_string(d)) + "_certificate"] = "not_applicable";
    }
  }
  r.results["certificates"] = certs;
  r.files.emplace_back("bisection.csv", csv.str());

  const auto rep = length_bounds_report(f, q, a.samples);
  auto bound = [](const BoundCheck& b) {
    json j = {{"lhs", b.lhs}, {"rhs", b.rhs}, {"pass", b.pass}, {"skipped", b.skipped}};
    if (!b.note.empty()) j["note"] = b.note;
    return j;
  };
  r.results["bounds"] = {{"upper", bound(rep.upper)},      {"lower", bound(rep.lower)},
                         {"sup_d_plus", rep.sup_d_plus},   {"inf_d_minus", rep.inf_d_minus},
                         {"length_q", rep.length_q},       {"length_p", rep.length_p}};
  r.verdicts["upper_bound"] = rep.upper.skipped ? "skipped" : (rep.upper.pass ? "holds" : "violated");
  r.verdicts["lower_bound"] = rep.lower.skipped ? "skipped" : (rep.lower.pass ? "holds" : "violated");
  ok = ok && (rep.upper.skipped || rep.upper.pass) && (rep.lower.skipped || rep.lower.pass);
  r.tolerances = {{"tol_t", tol_t}, {"samples", rep.samples}, {"slack", 0.05}};
  r.exit_code = ok ? 0 : 1;
  return r;
}

Report cmd_lift(const Context& c, const LiftArgs& a) {
  Report r;
  r.command = "lift";
  const MapHandle f = lookup_map(c, a.map);
  require(a.path, "--path");
  const Path p = c.registry.path(a.path, f.codomain().dim());
  const Point x0 = point_arg(a.start, f.domain().dim(), "--start");
  LiftOptions o = lift_options(c);
  o.step_init = a.step_init;
  o.step_max = a.step_max;
  o.validate();
  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(f);
  r.inputs["path"] = p.describe();
  r.inputs["start"] = to_json(x0);

  const auto tr = lift_path(f, p, x0, o);
  r.results["trace"] = trace_summary(tr);
  std::optional<Weight> w;
  if (!a.weight.empty()) w = c.registry.weight(a.weight);
  std::optional<Point> anchor;
  if (!a.anchor.empty()) anchor = parse_point(a.anchor, f.domain().dim());
  if (w && !anchor) anchor = x0;
  if (tr.nodes.size() >= 2) {
    const auto an = analyze_trace(tr, f.domain(), w, anchor);
    json tails = json::array();
    for (const auto& td : an.tail_diameters) tails.push_back({{"t", td.t}, {"diameter", td.diameter}});
    r.results["analysis"] = {{"alpha_hat", an.alpha_hat}, {"tail_diameters", tails}};
    if (an.weighted_alpha_hat) {
      r.results["analysis"]["weighted_alpha_hat"] = *an.weighted_alpha_hat;
      r.results["analysis"]["weight"] = w->describe();
    }
  }
  r.verdicts["lift"] = to_json(tr.verdict);
  r.tolerances = lift_tolerances(o);
  r.files.emplace_back("lift_trace.csv", lift_csv(tr));
  r.exit_code = tr.verdict.completed() ? 0 : 1;
  return r;
}

Report cmd_invert(const Context& c, const InvertArgs& a) {
  Report r;
  r.command = "invert";
  const MapHandle f = lookup_map(c, a.map);
  const Point y = point_arg(a.target, f.codomain().dim(), "--target");
  const Point x0 = point_arg(a.start, f.domain().dim(), "--start");
  const LiftOptions o = lift_options(c);
  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(f);
  r.inputs["target"] = to_json(y);
  r.inputs["start"] = to_json(x0);
  const auto res = invert_at(f, y, x0, o);
  if (res.x) {
    r.results["preimage"] = to_json(*res.x);
    r.results["residual"] = residual_norm(f, *res.x, y);
  } else {
    r.results["preimage"] = nullptr;
  }
  r.results["trace"] = trace_summary(res.trace);
  r.verdicts["lift"] = to_json(res.trace.verdict);
  r.tolerances = lift_tolerances(o);
  r.files.emplace_back("invert_trace.csv", lift_csv(res.trace));
  r.exit_code = res.x ? 0 : 1;
  return r;
}

Report cmd_fiber(const Context& c, const FiberArgs& a) {
  Report r;
  r.command = "fiber";
  const MapHandle f = lookup_map(c, a.map);
  const Point y = point_arg(a.target, f.codomain().dim(), "--target");
  const Region seeds = region_or_box(a.region, Point::Zero(f.domain().dim()), 2.0);
  if (seeds.dim() != f.domain().dim()) throw InputError("--region dimension does not match the map domain");
  if (a.starts < 1) throw InputError("--starts must be positive");
  SolveOptions so{.tol = c.tol.value_or(1e-12), .max_iter = 60, .max_halvings = 30};
  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(f);
  r.inputs["target"] = to_json(y);
  r.inputs["region"] = seeds.describe();
  const auto rep = fiber_enumerate(f, y, seeds, a.starts, so, c.seed);
  json pre = json::array();
  std::vector<std::string> header;
  for (int i = 0; i < f.domain().dim(); ++i) header.push_back("x_" + std::to_string(i + 1));
  header.emplace_back("residual");
  Csv csv(header);
  for (const auto& p : rep.preimages) {
    pre.push_back({{"x", to_json(p.x)}, {"residual", p.residual}});
    std::vector<double> row(p.x.data(), p.x.data() + p.x.size());
    row.push_back(p.residual);
    csv.row(row);
  }
  r.results["preimages"] = pre;
  r.results["count"] = rep.preimages.size();
  r.results["method"] = to_string(rep.method);
  r.results["disclaimer"] = rep.disclaimer;
  r.verdicts["fiber"] = rep.preimages.empty() ? "empty" : "found";
  r.tolerances = {{"solve_tol", so.tol}, {"max_iter", so.max_iter}, {"starts", rep.starts_used}};
  r.files.emplace_back("fiber.csv", csv.str());
  return r;
}

Report cmd_sheets(const Context& c, const SheetsArgs& a) {
  Report r;
  r.command = "sheets";
  const MapHandle f = lookup_map(c, a.map);
  const Point y = point_arg(a.target, f.codomain().dim(), "--target");
  require(a.loop, "--loop");
  const Path loop = c.registry.path(a.loop, f.codomain().dim());
  const Point x0 = point_arg(a.start, f.domain().dim(), "--start");
  if (a.max_orbit < 1) throw InputError("--max-orbit must be positive");
  const LiftOptions o = lift_options(c);
  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(f);
  r.inputs["target"] = to_json(y);
  r.inputs["loop"] = loop.describe();
  r.inputs["start"] = to_json(x0);
  const auto rep = sheet_count(f, y, loop, x0, a.max_orbit, o);
  std::vector<Point> orbit;
  for (const auto& p : rep.preimages) orbit.push_back(p.x);
  r.results["orbit"] = points_json(orbit);
  r.results["method"] = to_string(rep.method);
  if (rep.monodromy) {
    const auto& m = *rep.monodromy;
    r.results["closed"] = m.closed;
    r.results["orbit_size"] = m.orbit_size;
    r.results["permutation"] = m.permutation;
    r.results["sheets"] = m.closed ? json(m.orbit_size) : json(nullptr);
    r.results["translation"] = m.translation ? to_json(*m.translation) : json(nullptr);
    r.verdicts["orbit"] = m.closed ? "closed" : "no_return_within_max_orbit";
  }
  r.results["disclaimer"] = rep.disclaimer;
  if (rep.failure) r.verdicts["lift"] = to_json(*rep.failure);
  r.tolerances = lift_tolerances(o);
  r.tolerances["max_orbit"] = a.max_orbit;
  r.tolerances["identity_tol"] = 1e-6;
  r.exit_code = rep.failure ? 1 : 0;
  return r;
}

Report cmd_qi(const Context& c, const QiArgs& a) {
  Report r;
  r.command = "qi";
  const MapHandle f = lookup_map(c, a.map);
  require(a.region, "--region");
  const Region region = parse_region(a.region);
  std::optional<Region> k;
  if (!a.k.empty()) k = parse_region(a.k);
  if (a.samples < 1) throw InputError("--samples must be positive");
  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(f);
  r.inputs["region"] = region.describe();
  if (k) r.inputs["k"] = k->describe();
  const auto b = quasi_isometry_bounds(f, region, a.samples, k, c.seed);
  r.results["alpha_hat"] = b.alpha_hat;
  r.results["beta_hat"] = b.beta_hat;
  r.results["alpha_k"] = b.alpha_k ? json(*b.alpha_k) : json(nullptr);
  r.results["n_in_k"] = b.n_in_k;
  r.results["label"] = "sampled estimate";
  r.verdicts["bounded_below"] = b.alpha_hat > 0.0;
  r.tolerances = {{"samples", b.n_samples}};
  return r;
}

Report cmd_hadamard(const Context& c, const HadamardArgs& a) {
  Report r;
  r.command = "hadamard";
  const MapHandle f = lookup_map(c, a.map);
  const Point x0 = a.center.empty() ? Point(Point::Zero(f.domain().dim())) : parse_point(a.center, f.domain().dim());
  if (a.radii < 2) throw InputError("--radii must be at least 2");
  std::vector<double> radii = default_radii(x0, a.radii);
  if (a.t_max > 0.0) {
    const double scale = a.t_max / radii.back();
    for (double& t : radii) t *= scale;
  }
  ProfileBudget budget;
  budget.starts = a.starts;
  budget.boundary_samples = a.boundary;
  budget.seed = c.seed;
  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(f);
  r.inputs["center"] = to_json(x0);

  const auto prof = ball_infimum_profile(f, x0, radii, budget);
  Csv csv({"t", "r", "partial_integral"});
  for (std::size_t j = 0; j < prof.radii.size(); ++j) csv.row({prof.radii[j], prof.infima[j], prof.partial_integrals[j]});
  r.files.emplace_back("profile.csv", csv.str());
  r.results["profile"] = {{"radii", prof.radii},
                          {"infima", prof.infima},
                          {"partial_integrals", prof.partial_integrals},
                          {"regular", prof.regular}};
  r.tolerances = {{"starts", prof.budget.starts},
                  {"boundary_samples", prof.budget.boundary_samples},
                  {"descent_iters", prof.budget.descent_iters},
                  {"samples_per_radius", prof.samples_per_radius}};
  bool ok = true;
  try {
    const auto rep = classify_divergence(prof);
    json fits = json::array();
    for (const auto& m : rep.fits)
      fits.push_back({{"model", m.model},
                      {"rms", m.rms},
                      {"params", m.params},
                      {"admissible", m.admissible},
                      {"integral_diverges", m.integral_diverges}});
    r.results["classification"] = {{"class", to_string(rep.cls)}, {"best_model", rep.best_model}, {"fits", fits}};
    if (!rep.caveat.empty()) r.results["classification"]["caveat"] = rep.caveat;
    r.tolerances["fit_threshold"] = rep.threshold;
    r.verdicts["hadamard"] = to_string(rep.cls);
    if (rep.cls == DivergenceClass::Divergent) {
      std::vector<Point> xs;
      for (const auto& s : prof.samples) xs.push_back(s.x);
      const auto cert = weight_certificate(f, x0, weight_from_profile(prof, rep.cls), xs);
      r.results["profile_weight_certificate"] = certificate_json(cert);
    }
  } catch (const InputError& e) {
    r.results["classification"] = {{"error", e.what()}};
    r.verdicts["hadamard"] = "not_classified";
  }

  if (!a.weight.empty()) {
    const Weight w = c.registry.weight(a.weight);
    const double t_max = radii.back();
    const auto val = validate_weight(w, t_max);
    r.results["weight"] = {{"weight", w.describe()}, {"validation", weight_validation_json(val)}};
    r.tolerances["weight_t_max"] = t_max;
    if (val.ok) {
      const Region region = region_or_box(a.region, x0, 10.0);
      const auto cert = weight_certificate(f, x0, w, region, a.samples, c.seed);
      r.results["weight"]["certificate"] = certificate_json(cert);
      r.results["weight"]["region"] = region.describe();
      r.tolerances["certificate_samples"] = cert.n_samples;
      r.tolerances["certificate_margin"] = 1e-6;
      r.verdicts["weight_certificate"] = cert.pass ? "pass" : "fail";
      ok = cert.pass;
    } else {
      r.verdicts["weight_certificate"] = "invalid_weight";
      ok = false;
    }
  }
  r.exit_code = ok ? 0 : 1;
  return r;
}

namespace {

ImplicitProblem implicit_problem(const Context& c, const ImplicitArgs& a) {
  if (!a.problem.empty()) return c.registry.implicit(a.problem);
  const MapHandle f = lookup_map(c, a.map, a.vars);
  const Point w = a.w.empty() ? Point(Point::Zero(f.codomain().dim())) : parse_point(a.w, f.codomain().dim());
  return ImplicitProblem::make(f, a.x_dim, w);
}

std::string implicit_csv(const ImplicitTrace& tr, int xd, int yd) {
  std::vector<std::string> header{"t"};
  for (int i = 0; i < xd; ++i) header.push_back("x_" + std::to_string(i + 1));
  for (int i = 0; i < yd; ++i) header.push_back("y_" + std::to_string(i + 1));
  for (const char* h : {"residual", "monitor", "weight_integral"}) header.emplace_back(h);
  Csv csv(header);
  for (const auto& n : tr.nodes) {
    std::vector<double> row{n.t};
    for (int i = 0; i < xd; ++i) row.push_back(n.x[i]);
    for (int i = 0; i < yd; ++i) row.push_back(n.y[i]);
    row.push_back(n.residual);
    row.push_back(n.monitor);
    row.push_back(n.weight_integral.value_or(std::nan("")));
    csv.row(row);
  }
  return csv.str();
}

void implicit_trace_results(Report& r, const ImplicitTrace& tr, const ImplicitProblem& prob) {
  double worst = 0.0;
  for (const auto& n : tr.nodes) worst = std::max(worst, n.residual);
  r.results["trace"] = {{"nodes", tr.nodes.size()},
                        {"max_residual", worst},
                        {"end_x", to_json(tr.nodes.back().x)},
                        {"end_y", to_json(tr.endpoint())}};
  if (!tr.note.empty()) r.results["trace"]["note"] = tr.note;
  if (tr.fold_x) r.results["fold"] = {{"x", to_json(*tr.fold_x)}, {"y", to_json(*tr.fold_y)}};
  r.verdicts["implicit"] = to_json(tr.verdict);
  r.verdicts["weight_bound"] = to_string(tr.bound_status);
  r.files.emplace_back("implicit_trace.csv", implicit_csv(tr, prob.x_dim, prob.y_dim));
  r.exit_code = tr.verdict.completed() ? 0 : 1;
}

}  // namespace

Report cmd_implicit(const Context& c, const ImplicitArgs& a) {
  Report r;
  r.command = "implicit";
  const ImplicitProblem prob = implicit_problem(c, a);
  ImplicitOptions o;
  if (c.tol) o.tol = *c.tol;
  r.inputs = base_inputs(c);
  r.inputs["map"] = map_json(prob.f);
  r.inputs["x_dim"] = prob.x_dim;
  r.inputs["w"] = to_json(prob.w);
  r.inputs["mode"] = a.mode;
  r.tolerances = {{"tol", o.tol},
                  {"ode_tol", o.ode_tol},
                  {"step_init", o.step_init},
                  {"step_min", o.step_min},
                  {"step_max", o.step_max},
                  {"singular_threshold", o.singular_threshold},
                  {"blowup_radius", o.blowup_radius}};

  if (a.mode == "lift") {
    require(a.path, "--path");
    const Path p = c.registry.path(a.path, prob.x_dim);
    const Point y0 = point_arg(a.y0, prob.y_dim, "--y0");
    std::optional<Weight> w;
    if (!a.weight.empty()) w = c.registry.weight(a.weight);
    r.inputs["path"] = p.describe();
    r.inputs["y0"] = to_json(y0);
    if (w) r.inputs["weight"] = w->describe();
    implicit_trace_results(r, davidenko_lift(prob, p, y0, w, o), prob);
  } else if (a.mode == "eval") {
    const Point x0 = point_arg(a.x0, prob.x_dim, "--x0");
    const Point y0 = point_arg(a.y0, prob.y_dim, "--y0");
    const Point xt = point_arg(a.target, prob.x_dim, "--target");
    r.inputs["x0"] = to_json(x0);
    r.inputs["y0"] = to_json(y0);
    r.inputs["target"] = to_json(xt);
    const auto res = implicit_eval(prob, xt, x0, y0, o);
    r.results["y"] = res.y ? to_json(*res.y) : json(nullptr);
    implicit_trace_results(r, res.trace, prob);
  } else if (a.mode == "branches") {
    require(a.grid, "--grid");
    std::vector<Point> grid;
    for (const auto& item : split(a.grid, ';')) grid.push_back(parse_point(item, prob.x_dim));
    const Region seeds = region_or_box(a.y_region, Point::Zero(prob.y_dim), 3.0);
    if (seeds.dim() != prob.y_dim) throw InputError("--y-region dimension does not match the y block");
    r.inputs["grid"] = points_json(grid);
    r.inputs["y_region"] = seeds.describe();
    const auto probe = branch_probe(prob, grid, seeds, a.starts, o, c.seed);
    json groups = json::array();
    for (const auto& g : probe.groups) {
      json members = json::array();
      for (const auto& [x, y] : g.members) members.push_back({{"x", to_json(x)}, {"y", to_json(y)}});
      groups.push_back(members);
    }
    r.results["groups"] = groups;
    r.results["count"] = probe.count;
    r.results["label"] = probe.label;
    r.verdicts["branches"] = probe.count == 1 ? "single_group" : "multiple_groups";
    r.tolerances["starts"] = a.starts;
  } else {
    throw InputError("--mode must be lift, eval or branches");
  }
  return r;
}

Report cmd_registry(const Context& c, const RegistryArgs& a) {
  Report r;
  r.command = "registry";
  if (c.registry_file.empty()) throw InputError("registry " + a.action + " needs --registry <file>");
  r.inputs = base_inputs(c);
  r.inputs["action"] = a.action;
  if (a.action == "list") {
    for (const char* kind : {"map", "weight", "path", "implicit"}) r.results[kind] = c.registry.names(kind);
    r.results["builtins"] = builtin_names();
    r.verdicts["registry"] = "listed";
  } else if (a.action == "validate") {
    const auto problems = c.registry.validate();
    r.results["problems"] = problems;
    r.results["sections"] = c.registry.sections().size();
    r.verdicts["registry"] = problems.empty() ? "valid" : "invalid";
    r.exit_code = problems.empty() ? 0 : 2;
  } else {
    throw InputError("registry action must be list or validate");
  }
  return r;
}

}  // namespace liftkit::cli
