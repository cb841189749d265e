#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "liftkit/space.hpp"

namespace liftkit {

struct BoxRegion {
  Point lo;
  Point hi;
};

struct BallRegion {
  Point center;
  double radius = 1.0;
};

struct PointList {
  std::vector<Point> points;
};

/// A bounded sampling region in chart coordinates.
class Region {
 public:
  using Kind = std::variant<BoxRegion, BallRegion, PointList>;

  explicit Region(Kind kind);
  static Region box(Point lo, Point hi);
  static Region ball(Point center, double radius);
  static Region points(std::vector<Point> pts);

  int dim() const;
  bool contains(const Point& x) const;

  /// Deterministic samples: box corners (dim <= 10) then Halton points; the
  /// ball center then Halton points accepted inside the ball; point lists
  /// verbatim (first n).
  std::vector<Point> sample(int n, std::uint64_t seed = 0) const;

  const Kind& kind() const { return kind_; }
  std::string describe() const;

 private:
  Kind kind_;
};

/// "lo..hi" with comma-separated coordinates, e.g. "-1,-1..1,1", or
/// "ball:cx,cy;r".
Region parse_region(const std::string& text);

}  // namespace liftkit
