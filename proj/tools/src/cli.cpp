#include "liftkit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "liftkit/errors.hpp"

namespace liftkit::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Path lifting, global inversion and Hadamard-type diagnostics for maps between metric spaces.",
               "liftkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string registry_file, out_dir;
  std::uint64_t seed = 0;
  bool as_json = false;
  std::optional<double> tol;
  app.add_option("--registry", registry_file, "Registry file with named maps, weights, paths and problems");
  app.add_option("--seed", seed, "Seed for sampled methods")->capture_default_str();
  app.add_option("--out", out_dir, "Directory for report.json and CSV traces");
  app.add_flag("--json", as_json, "Print the JSON report instead of a summary");
  app.add_option("--tol", tol, "Override the main tolerance of the command");

  std::function<Report(const Context&)> action;

  DerivArgs deriv;
  auto* s = app.add_subcommand("deriv", "Lower and upper scalar derivatives, optionally the surjection constant");
  s->add_option("--map", deriv.map, "Map name or expression")->required();
  s->add_option("--at", deriv.at, "Point, e.g. 0,1")->required();
  s->add_option("--method", deriv.method, "svd or shell")->capture_default_str();
  s->add_flag("--surjection", deriv.surjection, "Also estimate sur(f,x)");
  s->add_option("--shells", deriv.shells, "Shell count for sampling")->capture_default_str();
  s->add_option("--directions", deriv.directions, "Directions per dimension")->capture_default_str();
  s->callback([&] { action = [&](const Context& c) { return cmd_deriv(c, deriv); }; });

  LengthArgs length;
  s = app.add_subcommand("length", "Length of a path, or of its image under a map");
  s->add_option("--path", length.path, "Path spec or registry name")->required();
  s->add_option("--map", length.map, "Measure f o path instead");
  s->add_option("--dim", length.dim, "Path dimension when it cannot be inferred");
  s->add_option("--from", length.from, "Sub-interval start");
  s->add_option("--to", length.to, "Sub-interval end");
  s->add_option("--reparam", length.reparam, "Write an arc-length table with this many knots");
  s->callback([&] { action = [&](const Context& c) { return cmd_length(c, length); }; });

  MeanValueArgs mv;
  s = app.add_subcommand("meanvalue", "Bisection certificates and the length bounds along a path");
  s->add_option("--map", mv.map, "Map name or expression")->required();
  s->add_option("--path", mv.path, "Path in the domain")->required();
  s->add_option("--direction", mv.direction, "upper, lower or both")->capture_default_str();
  s->add_option("--samples", mv.samples, "Sample points for the bounds")->capture_default_str();
  s->callback([&] { action = [&](const Context& c) { return cmd_meanvalue(c, mv); }; });

  LiftArgs lift;
  s = app.add_subcommand("lift", "Lift a codomain path through a local homeomorphism");
  s->add_option("--map", lift.map, "Map name or expression")->required();
  s->add_option("--path", lift.path, "Path in the codomain")->required();
  s->add_option("--start", lift.start, "Lift start x0 with f(x0) = p(0)")->required();
  s->add_option("--step-init", lift.step_init, "Initial parameter step")->capture_default_str();
  s->add_option("--step-max", lift.step_max, "Largest parameter step")->capture_default_str();
  s->add_option("--weight", lift.weight, "Weight for the weighted alpha estimate");
  s->add_option("--anchor", lift.anchor, "Anchor point for the weight (default: start)");
  s->callback([&] { action = [&](const Context& c) { return cmd_lift(c, lift); }; });

  InvertArgs inv;
  s = app.add_subcommand("invert", "Solve f(x) = y by lifting the segment from f(start) to y");
  s->add_option("--map", inv.map, "Map name or expression")->required();
  s->add_option("--target", inv.target, "Target y")->required();
  s->add_option("--start", inv.start, "Start point")->required();
  s->callback([&] { action = [&](const Context& c) { return cmd_invert(c, inv); }; });

  FiberArgs fiber;
  s = app.add_subcommand("fiber", "Enumerate preimages of a point by multistart Newton");
  s->add_option("--map", fiber.map, "Map name or expression")->required();
  s->add_option("--target", fiber.target, "Target y")->required();
  s->add_option("--region", fiber.region, "Seed region 'lo..hi' or 'ball:c;r' (default: [-2,2]^n)");
  s->add_option("--starts", fiber.starts, "Number of seeds")->capture_default_str();
  s->callback([&] { action = [&](const Context& c) { return cmd_fiber(c, fiber); }; });

  SheetsArgs sheets;
  s = app.add_subcommand("sheets", "Lift a loop repeatedly and report the orbit of the start point");
  s->add_option("--map", sheets.map, "Map name or expression")->required();
  s->add_option("--target", sheets.target, "Base point y of the loop")->required();
  s->add_option("--loop", sheets.loop, "Loop spec, e.g. loop:0,0,1")->required();
  s->add_option("--start", sheets.start, "Preimage of y to start from")->required();
  s->add_option("--max-orbit", sheets.max_orbit, "Largest number of loop lifts")->capture_default_str();
  s->callback([&] { action = [&](const Context& c) { return cmd_sheets(c, sheets); }; });

  QiArgs qi;
  s = app.add_subcommand("qi", "Sampled quasi-isometry constants over a region");
  s->add_option("--map", qi.map, "Map name or expression")->required();
  s->add_option("--region", qi.region, "Sample region 'lo..hi' or 'ball:c;r'")->required();
  s->add_option("--k", qi.k, "Compact set K in the codomain");
  s->add_option("--samples", qi.samples, "Number of samples")->capture_default_str();
  s->callback([&] { action = [&](const Context& c) { return cmd_qi(c, qi); }; });

  HadamardArgs had;
  s = app.add_subcommand("hadamard", "Ball-infimum profile, divergence class and weight checks");
  s->add_option("--map", had.map, "Map name or expression")->required();
  s->add_option("--center", had.center, "Center x0 (default: origin)");
  s->add_option("--radii", had.radii, "Number of log-spaced radii")->capture_default_str();
  s->add_option("--t-max", had.t_max, "Largest radius (default: 100 (1 + |x0|))");
  s->add_option("--starts", had.starts, "Multistart descents per radius")->capture_default_str();
  s->add_option("--boundary", had.boundary, "Sphere samples per radius (0: 64 dim)")->capture_default_str();
  s->add_option("--weight", had.weight, "Weight to validate and certify");
  s->add_option("--region", had.region, "Certificate region (default: box of half-width 10)");
  s->add_option("--samples", had.samples, "Certificate samples")->capture_default_str();
  s->callback([&] { action = [&](const Context& c) { return cmd_hadamard(c, had); }; });

  ImplicitArgs imp;
  s = app.add_subcommand("implicit", "Continuation on f(x, y) = w along paths in x");
  s->add_option("--problem", imp.problem, "Registry implicit problem");
  s->add_option("--map", imp.map, "Map of (x, y), when no --problem is given");
  s->add_option("--vars", imp.vars, "Variable order for an expression map, x block first");
  s->add_option("--x-dim", imp.x_dim, "Dimension of the x block")->capture_default_str();
  s->add_option("--w", imp.w, "Level w (default: 0)");
  s->add_option("--mode", imp.mode, "lift, eval or branches")->capture_default_str();
  s->add_option("--path", imp.path, "x-path (lift)");
  s->add_option("--x0", imp.x0, "Start x (eval)");
  s->add_option("--y0", imp.y0, "Start y (lift, eval)");
  s->add_option("--target", imp.target, "Target x (eval)");
  s->add_option("--grid", imp.grid, "x grid 'x1;x2;...' (branches)");
  s->add_option("--y-region", imp.y_region, "y seed region (branches, default: [-3,3]^n)");
  s->add_option("--starts", imp.starts, "Seeds per grid point (branches)")->capture_default_str();
  s->add_option("--weight", imp.weight, "Weight for the a priori bound (lift)");
  s->callback([&] { action = [&](const Context& c) { return cmd_implicit(c, imp); }; });

  RegistryArgs reg;
  s = app.add_subcommand("registry", "List or validate a registry file");
  s->add_option("action", reg.action, "list or validate")->required()->check(CLI::IsMember({"list", "validate"}));
  s->callback([&] { action = [&](const Context& c) { return cmd_registry(c, reg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "liftkit: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    Context ctx;
    ctx.seed = seed;
    ctx.tol = tol;
    if (tol && !(*tol > 0.0)) throw InputError("--tol must be positive");
    if (!registry_file.empty()) {
      ctx.registry = Registry::load(registry_file);
      ctx.registry_file = registry_file;
    }
    const Report r = action(ctx);
    const bool to_dir = !out_dir.empty();
    const auto doc = document(r, seed, to_dir);
    if (to_dir) {
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "report.json", doc.dump(2) + "\n");
      for (const auto& [name, text] : r.files) write_file(fs::path(out_dir) / name, text);
    }
    out << (as_json ? doc.dump(2) + "\n" : summary(doc));
    return r.exit_code;
  } catch (const InputError& e) {
    err << "liftkit: input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "liftkit: precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "liftkit: domain error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "liftkit: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "liftkit: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace liftkit::cli
