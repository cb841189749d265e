#pragma once

#include <string>
#include <utility>
#include <vector>

#include "liftkit/implicit.hpp"
#include "liftkit/map.hpp"
#include "liftkit/path.hpp"
#include "liftkit/weight.hpp"

namespace liftkit {

/// Comma-separated reals, e.g. "9,2". Throws InputError.
std::vector<double> parse_numbers(const std::string& text);
/// Point from "9,2"; checks the dimension when dim >= 0.
Point parse_point(const std::string& text, int dim = -1);

/// seg:a;b (or 2*dim numbers), poly:p1;p2;..., loop:cx,cy,r[,winding],
/// expr:(e1, e2)@t0,t1. dim < 0 infers the dimension where possible.
Path parse_path_spec(const std::string& text, int dim = -1);

struct RegistrySection {
  std::string kind;  // map, weight, path, implicit
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
  int line = 0;

  const std::string* find(const std::string& key) const;
  const std::string& get(const std::string& key) const;  // throws InputError when missing
};

/// Named maps, weights, paths and implicit problems read from an INI-style file:
///
///   [map twist]
///   components = (x + y^3, y)
///   vars = x, y
///
/// Lookups fall back to built-ins and inline specifications for names the
/// file does not define.
class Registry {
 public:
  Registry() = default;
  static Registry parse(const std::string& text, const std::string& origin = "<registry>");
  static Registry load(const std::string& file);

  const std::vector<RegistrySection>& sections() const { return sections_; }
  std::vector<std::string> names(const std::string& kind) const;

  MapHandle map(const std::string& ref) const;
  Weight weight(const std::string& ref) const;
  Path path(const std::string& ref, int dim = -1) const;
  ImplicitProblem implicit(const std::string& ref) const;

  /// Resolves every section; returns one message per failure.
  std::vector<std::string> validate() const;

 private:
  const RegistrySection* section(const std::string& kind, const std::string& name) const;
  std::string where(const RegistrySection& s) const;

  std::vector<RegistrySection> sections_;
  std::string origin_;
};

}  // namespace liftkit
