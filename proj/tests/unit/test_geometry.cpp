#include <cmath>
#include <random>

#include "doctest.h"
#include "liftkit/errors.hpp"
#include "liftkit/path.hpp"
#include "liftkit/region.hpp"
#include "liftkit/space.hpp"

using namespace liftkit;

namespace {
Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}
}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("distance examples") {
    CHECK(Space::euclidean(2).distance(pt({0, 0}), pt({3, 4})) == doctest::Approx(5.0));
    CHECK(Space::circle().distance(pt({0.1}), pt({2 * M_PI - 0.1})) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(Space::euclidean(2, 1.0).distance(pt({0, 0}), pt({3, 4})) == doctest::Approx(7.0));
    CHECK(Space::euclidean(2, INFINITY).distance(pt({0, 0}), pt({3, 4})) == doctest::Approx(4.0));
    CHECK_THROWS_AS(Space::euclidean(2).distance(pt({0}), pt({1, 2})), InputError);
    const Space half = Space::open_subset(Space::euclidean(1), "x");
    CHECK_THROWS_AS(half.distance(pt({-1}), pt({1})), DomainError);
  }

  TEST_CASE("product distance is the sum of factor distances") {
    const Space s = Space::product({Space::euclidean(1), Space::circle()});
    CHECK(s.distance(pt({0, 0.1}), pt({3, 2 * M_PI - 0.1})) == doctest::Approx(3.2));
  }

  TEST_CASE("metric axioms on random triples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5, 5);
    const std::vector<Space> spaces = {Space::euclidean(3), Space::euclidean(2, 1.0), Space::euclidean(2, INFINITY),
                                       Space::euclidean(2, 3.5), Space::circle(), Space::torus(2),
                                       Space::product({Space::euclidean(1), Space::circle()})};
    for (const auto& s : spaces) {
      auto draw = [&] {
        Point p(s.dim());
        for (int i = 0; i < s.dim(); ++i) p(i) = u(rng);
        return s.canonical(p);
      };
      int bad = 0;
      for (int k = 0; k < 10000; ++k) {
        const Point a = draw(), b = draw(), c = draw();
        const double ab = s.distance(a, b), bc = s.distance(b, c), ac = s.distance(a, c);
        if (ac > ab + bc + 1e-12 || std::abs(ab - s.distance(b, a)) > 1e-12 || ab < 0) ++bad;
      }
      CHECK_MESSAGE(bad == 0, s.describe());
      CHECK(s.distance(draw(), Point(Point::Zero(s.dim()))) >= 0.0);
    }
  }

  TEST_CASE("canonical quotient range") {
    const Point c = Space::circle().canonical(pt({3 * M_PI}));
    CHECK(c(0) >= -M_PI);
    CHECK(c(0) < M_PI);
    CHECK(c(0) == doctest::Approx(-M_PI));
  }

  TEST_CASE("parse_space") {
    CHECK(parse_space("euclidean(2)").dim() == 2);
    CHECK(parse_space("torus(3)").dim() == 3);
    CHECK(parse_space("product(euclidean(1),circle)").dim() == 2);
    CHECK_THROWS_AS(parse_space("sphere(2)"), InputError);
  }

  TEST_CASE("path_eval examples") {
    const Path s = Path::segment(pt({0, 0}), pt({2, 2}));
    CHECK((s.eval(0.5) - pt({1, 1})).norm() < 1e-15);
    const Path l = Path::loop(pt({0, 0}), 1.0, 1);
    CHECK((l.eval(0.0) - pt({1, 0})).norm() < 1e-15);
    const Path sm = Path::sampled({0.0, 1.0}, {pt({0, 0}), pt({4, 0})});
    CHECK((sm.eval(0.25) - pt({1, 0})).norm() < 1e-15);
    CHECK_THROWS_AS(s.eval(1.5), InputError);
  }

  TEST_CASE("path_length examples") {
    const auto circ = path_length(Path::loop(pt({0, 0}), 1.0, 1));
    CHECK(circ.converged);
    CHECK(std::abs(circ.value - 2 * M_PI) < 1e-6);

    const auto seg = path_length(Path::segment(pt({0, 0}), pt({3, 4})));
    CHECK(seg.converged);
    CHECK(seg.value == 5.0);
    CHECK(seg.approximants.front() == doctest::Approx(5.0).epsilon(1e-15));

    // Independent quadrature of the integral of sqrt(1 + 4 t^2) over [0, 1].
    const auto par = path_length(Path::expression("(t, t^2)", 0, 1));
    CHECK(par.converged);
    CHECK(std::abs(par.value - 1.478942857544597) < 1e-7);
    for (std::size_t i = 1; i < par.approximants.size(); ++i) CHECK(par.approximants[i] >= par.approximants[i - 1]);
    for (double a : par.approximants) CHECK(par.value >= a);
  }

  TEST_CASE("non-rectifiable path is flagged") {
    // t sin(1/t) has infinite length near 0.
    LengthOptions o;
    o.k_max = 12;
    const auto r = path_length(Path::expression("(t, t*sin(1/t))", 1e-4, 1), o);
    CHECK_FALSE(r.converged);
  }

  TEST_CASE("chord sums nondecreasing under random nested refinement") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    const Path p = Path::expression("(cos(3*t), sin(2*t), t^3)", 0, 2);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> part = {0.0, 2.0};
      double prev = 0.0;
      for (int r = 0; r < 8; ++r) {
        part.push_back(2.0 * u(rng));
        std::sort(part.begin(), part.end());
        double sum = 0.0;
        for (std::size_t i = 1; i < part.size(); ++i) sum += (p.eval(part[i]) - p.eval(part[i - 1])).norm();
        CHECK(sum >= prev - 1e-13);
        prev = sum;
      }
    }
  }

  TEST_CASE("segment geodesic identity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10, 10), t(0, 1);
    for (int k = 0; k < 1000; ++k) {
      const Point a = pt({u(rng), u(rng), u(rng)}), b = pt({u(rng), u(rng), u(rng)});
      const Path s = Path::segment(a, b);
      const double L = (b - a).norm();
      const double t1 = t(rng), t2 = t(rng);
      CHECK(std::abs((s.eval(t1) - s.eval(t2)).norm() - L * std::abs(t1 - t2)) <= 1e-12 * (1 + L));
    }
  }

  TEST_CASE("reparam_arclength") {
    const auto seg = reparam_arclength(Path::segment(pt({0, 0}), pt({3, 4})));
    CHECK(seg.path.t0() == 0.0);
    CHECK(seg.path.t1() == doctest::Approx(5.0));
    CHECK((seg.path.eval(2.5) - pt({1.5, 2})).norm() < 1e-12);

    const auto flat = reparam_arclength(Path::segment(pt({1, 1}), pt({1, 1})));
    CHECK(flat.degenerate);
    CHECK(flat.length == 0.0);

    // Fine uniform resampling oracle: t* = 0.610738682958060 halves the arc length.
    const auto par = reparam_arclength(Path::expression("(t, t^2)", 0, 1));
    const Point mid = par.path.eval(0.5 * par.path.t1());
    CHECK((mid - pt({0.6107386829580598, 0.37300173886134547})).norm() < 1e-6);
    CHECK(std::abs(par.length - 1.478942857544597) < 2e-6);
    // Unit speed: cumulative length up to s equals s.
    LengthOracle oracle(par.path);
    for (double s : {0.1, 0.7, 1.2}) CHECK(std::abs(oracle.length(0, s) - s) < 2e-8 * par.length + 1e-12);
  }

  TEST_CASE("reverse_path") {
    const Path s = Path::segment(pt({0, 0}), pt({1, 2}));
    const Path r = reverse_path(s);
    CHECK((r.eval(0) - pt({1, 2})).norm() == 0.0);
    const Path e = Path::expression("(t, t^2)", 0, 1);
    const Path rr = reverse_path(reverse_path(e));
    for (double t : {0.0, 0.3, 1.0}) CHECK((rr.eval(t) - e.eval(t)).norm() < 1e-15);
    CHECK(std::abs(path_length(reverse_path(e)).value - path_length(e).value) < 1e-9);
    const Path lp = Path::loop(pt({0, 0}), 2.0, 1);
    CHECK(std::abs(path_length(reverse_path(lp)).value - path_length(lp).value) < 1e-9);
  }

  TEST_CASE("regions") {
    const Region b = parse_region("-1,-1..1,1");
    const auto pts = b.sample(10, 0);
    CHECK(pts.size() == 10);
    CHECK((pts[0] - pt({-1, -1})).norm() == 0.0);
    for (const auto& p : pts) CHECK(b.contains(p));
    const Region ball = parse_region("ball:0,0;2");
    for (const auto& p : ball.sample(50, 1)) CHECK(p.norm() <= 2.0);
    CHECK(b.sample(10, 0) == pts);
  }
}
