#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "liftkit/registry.hpp"
#include "report.hpp"

namespace liftkit::cli {

struct Context {
  Registry registry;
  std::string registry_file;
  std::uint64_t seed = 0;
  std::optional<double> tol;
};

struct DerivArgs {
  std::string map, at, method = "svd";
  bool surjection = false;
  int shells = 6, directions = 64;
};

struct LengthArgs {
  std::string path, map, from, to;
  int dim = -1;
  int reparam = 0;
};

struct MeanValueArgs {
  std::string map, path, direction = "both";
  int samples = 257;
};

struct LiftArgs {
  std::string map, path, start, weight, anchor;
  double step_init = 1e-2, step_max = 0.1;
};

struct InvertArgs {
  std::string map, target, start;
};

struct FiberArgs {
  std::string map, target, region;
  int starts = 64;
};

struct SheetsArgs {
  std::string map, target, loop, start;
  int max_orbit = 8;
};

struct QiArgs {
  std::string map, region, k;
  int samples = 256;
};

struct HadamardArgs {
  std::string map, center, weight, region;
  int radii = 24, starts = 32, boundary = 0, samples = 256;
  double t_max = 0.0;
};

struct ImplicitArgs {
  std::string problem, map, vars, w, mode = "lift", path, x0, y0, target, grid, y_region, weight;
  int x_dim = 1, starts = 16;
};

struct RegistryArgs {
  std::string action;
};

Report cmd_deriv(const Context& c, const DerivArgs& a);
Report cmd_length(const Context& c, const LengthArgs& a);
Report cmd_meanvalue(const Context& c, const MeanValueArgs& a);
Report cmd_lift(const Context& c, const LiftArgs& a);
Report cmd_invert(const Context& c, const InvertArgs& a);
Report cmd_fiber(const Context& c, const FiberArgs& a);
Report cmd_sheets(const Context& c, const SheetsArgs& a);
Report cmd_qi(const Context& c, const QiArgs& a);
Report cmd_hadamard(const Context& c, const HadamardArgs& a);
Report cmd_implicit(const Context& c, const ImplicitArgs& a);
Report cmd_registry(const Context& c, const RegistryArgs& a);

}  // namespace liftkit::cli
