#include <benchmark/benchmark.h>

#include <random>

#include "liftkit/expr.hpp"
#include "liftkit/hadamard.hpp"
#include "liftkit/lift.hpp"
#include "liftkit/map.hpp"
#include "liftkit/meanvalue.hpp"
#include "liftkit/path.hpp"

using namespace liftkit;

namespace {

Point pt2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

void BM_LiftShear3(benchmark::State& state) {
  const MapHandle f = resolve_map("shear3");
  const Path p = Path::segment(pt2(0, 0), pt2(9, 2));
  for (auto _ : state) benchmark::DoNotOptimize(lift_path(f, p, pt2(0, 0)).lift_length);
}
BENCHMARK(BM_LiftShear3);

void BM_LiftPolarExpLoop(benchmark::State& state) {
  const MapHandle f = resolve_map("polar_exp");
  const Path loop = Path::loop(pt2(0, 0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(lift_path(f, loop, pt2(0, 0)).lift_length);
}
BENCHMARK(BM_LiftPolarExpLoop);

void BM_PathLengthComposed(benchmark::State& state) {
  const MapHandle f = resolve_map("shear3");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<Point> knots;
  for (int i = 0; i < state.range(0); ++i) knots.push_back(pt2(u(rng), u(rng)));
  const Path p = compose(f, Path::polyline(knots));
  for (auto _ : state) benchmark::DoNotOptimize(path_length(p).value);
}
BENCHMARK(BM_PathLengthComposed)->Arg(4)->Arg(32);

void BM_JacobianAutomatic(benchmark::State& state) {
  MapSpec s;
  s.text = "(x*exp(y) + sin(x*y), x^3 - y^2 + atan(x))";
  s.vars = {"x", "y"};
  const MapHandle f = resolve_map(s);
  const Point x = pt2(0.3, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_at(f, x)(0, 0));
}
BENCHMARK(BM_JacobianAutomatic);

void BM_JacobianFiniteDifference(benchmark::State& state) {
  MapSpec s;
  s.text = "(x*exp(y) + sin(x*y), x^3 - y^2 + atan(x))";
  s.vars = {"x", "y"};
  s.finite_difference = true;
  const MapHandle f = resolve_map(s);
  const Point x = pt2(0.3, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_at(f, x)(0, 0));
}
BENCHMARK(BM_JacobianFiniteDifference);

void BM_ProfileShear3(benchmark::State& state) {
  const MapHandle f = resolve_map("shear3");
  for (auto _ : state) benchmark::DoNotOptimize(ball_infimum_profile(f, pt2(0, 0)).infima.back());
}
BENCHMARK(BM_ProfileShear3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
