#include "liftkit/lowdisc.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace liftkit {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

}  // namespace

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f /= base;
  }
  return result;
}

Halton::Halton(int dim, std::uint64_t seed) {
  if (dim < 1 || dim > static_cast<int>(std::size(kPrimes))) {
    throw std::invalid_argument("Halton: unsupported dimension");
  }
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  shift_.resize(static_cast<std::size_t>(dim));
  for (auto& s : shift_) s = uni(gen);
}

Eigen::VectorXd Halton::next() {
  Eigen::VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) {
    double u = radical_inverse(index_, kPrimes[i]) + shift_[static_cast<std::size_t>(i)];
    v[i] = u - std::floor(u);
  }
  ++index_;
  return v;
}

std::vector<Eigen::VectorXd> Halton::take(int n) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(next());
  return out;
}

std::vector<Eigen::VectorXd> sphere_directions(int dim, int count) {
  std::vector<Eigen::VectorXd> dirs;
  if (dim == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
    dirs.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return dirs;
  }
  dirs.reserve(static_cast<std::size_t>(count));
  if (dim == 2) {
    for (int j = 0; j < count; ++j) {
      const double theta = 2.0 * std::numbers::pi * (j + 0.5) / count;
      Eigen::VectorXd v(2);
      v << std::cos(theta), std::sin(theta);
      dirs.push_back(v);
    }
    return dirs;
  }
  // Box-Muller on unshifted Halton points: pairs of uniforms -> pairs of normals.
  const int pairs = (dim + 1) / 2;
  for (int j = 1; static_cast<int>(dirs.size()) < count; ++j) {
    Eigen::VectorXd v(dim);
    for (int p = 0; p < pairs; ++p) {
      const double u1 = radical_inverse(static_cast<std::uint64_t>(j), kPrimes[2 * p]);
      const double u2 = radical_inverse(static_cast<std::uint64_t>(j), kPrimes[2 * p + 1]);
      const double r = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      v[2 * p] = r * std::cos(2.0 * std::numbers::pi * u2);
      if (2 * p + 1 < dim) v[2 * p + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double n = v.norm();
    if (n > 1e-12) dirs.push_back(v / n);
  }
  return dirs;
}

}  // namespace liftkit
