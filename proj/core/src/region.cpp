#include "liftkit/region.hpp"

#include <cmath>
#include <sstream>

#include "liftkit/errors.hpp"
#include "liftkit/lowdisc.hpp"

namespace liftkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad number '" + item + "' in region '" + s + "'");
    }
  }
  return out;
}

Point to_point(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

Region::Region(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const BoxRegion& b) {
                   if (b.lo.size() != b.hi.size() || b.lo.size() == 0) throw InputError("box corners must share a dimension");
                   if ((b.hi.array() < b.lo.array()).any()) throw InputError("box needs lo <= hi componentwise");
                 },
                 [](const BallRegion& b) {
                   if (b.center.size() == 0 || !(b.radius > 0.0)) throw InputError("ball needs a center and positive radius");
                 },
                 [](const PointList& p) {
                   if (p.points.empty()) throw InputError("point list region is empty");
                 },
             },
             kind_);
}

Region Region::box(Point lo, Point hi) { return Region(BoxRegion{std::move(lo), std::move(hi)}); }
Region Region::ball(Point center, double radius) { return Region(BallRegion{std::move(center), radius}); }
Region Region::points(std::vector<Point> pts) { return Region(PointList{std::move(pts)}); }

int Region::dim() const {
  return std::visit(overloaded{
                        [](const BoxRegion& b) { return static_cast<int>(b.lo.size()); },
                        [](const BallRegion& b) { return static_cast<int>(b.center.size()); },
                        [](const PointList& p) { return static_cast<int>(p.points.front().size()); },
                    },
                    kind_);
}

bool Region::contains(const Point& x) const {
  if (x.size() != dim()) return false;
  return std::visit(overloaded{
                        [&](const BoxRegion& b) { return (x.array() >= b.lo.array()).all() && (x.array() <= b.hi.array()).all(); },
                        [&](const BallRegion& b) { return (x - b.center).norm() <= b.radius; },
                        [&](const PointList& p) {
                          for (const auto& q : p.points) {
                            if (same_point(q, x)) return true;
                          }
                          return false;
                        },
                    },
                    kind_);
}

std::vector<Point> Region::sample(int n, std::uint64_t seed) const {
  std::vector<Point> out;
  if (n <= 0) return out;
  out.reserve(static_cast<std::size_t>(n));
  std::visit(overloaded{
                 [&](const BoxRegion& b) {
                   const int d = static_cast<int>(b.lo.size());
                   if (d <= 10 && (1 << d) <= n) {
                     for (int mask = 0; mask < (1 << d); ++mask) {
                       Point c(d);
                       for (int i = 0; i < d; ++i) c[i] = (mask >> i) & 1 ? b.hi[i] : b.lo[i];
                       out.push_back(c);
                     }
                   }
                   Halton h(d, seed);
                   while (static_cast<int>(out.size()) < n) {
                     out.push_back(b.lo + (b.hi - b.lo).cwiseProduct(h.next()));
                   }
                 },
                 [&](const BallRegion& b) {
                   const int d = static_cast<int>(b.center.size());
                   out.push_back(b.center);
                   Halton h(d, seed);
                   while (static_cast<int>(out.size()) < n) {
                     Point u = 2.0 * h.next() - Point::Ones(d);
                     if (u.norm() <= 1.0) out.push_back(b.center + b.radius * u);
                   }
                 },
                 [&](const PointList& p) {
                   for (const auto& q : p.points) {
                     if (static_cast<int>(out.size()) >= n) break;
                     out.push_back(q);
                   }
                 },
             },
             kind_);
  return out;
}

std::string Region::describe() const {
  std::ostringstream os;
  auto pt = [&](const Point& p) {
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  };
  std::visit(overloaded{
                 [&](const BoxRegion& b) {
                   pt(b.lo);
                   os << "..";
                   pt(b.hi);
                 },
                 [&](const BallRegion& b) {
                   os << "ball:";
                   pt(b.center);
                   os << ";" << b.radius;
                 },
                 [&](const PointList& p) { os << "points[" << p.points.size() << "]"; },
             },
             kind_);
  return os.str();
}

Region parse_region(const std::string& text) {
  if (text.rfind("ball:", 0) == 0) {
    const auto body = text.substr(5);
    const auto semi = body.find(';');
    if (semi == std::string::npos) throw InputError("ball region must be 'ball:c1,c2,...;radius'");
    const auto c = split_numbers(body.substr(0, semi), ',');
    const auto r = split_numbers(body.substr(semi + 1), ',');
    if (r.size() != 1) throw InputError("ball region needs one radius");
    return Region::ball(to_point(c), r[0]);
  }
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw InputError("region must be 'lo..hi' or 'ball:center;radius'");
  const auto lo = split_numbers(text.substr(0, dots), ',');
  const auto hi = split_numbers(text.substr(dots + 2), ',');
  if (lo.size() != hi.size()) throw InputError("region corners differ in dimension");
  return Region::box(to_point(lo), to_point(hi));
}

}  // namespace liftkit
