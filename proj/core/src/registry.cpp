#include "liftkit/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "liftkit/errors.hpp"

namespace liftkit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  for (auto& v : split(s, ','))
    if (!v.empty()) out.push_back(v);
  return out;
}

std::vector<Point> parse_point_list(const std::string& body, int dim) {
  std::vector<Point> pts;
  if (body.find(';') != std::string::npos) {
    for (const auto& part : split(body, ';')) pts.push_back(parse_point(part, dim));
    return pts;
  }
  const auto v = parse_numbers(body);
  if (dim <= 0) throw InputError("cannot infer the point dimension of '" + body + "'; separate points with ';'");
  if (v.size() % static_cast<std::size_t>(dim) != 0)
    throw InputError("'" + body + "' does not split into points of dimension " + std::to_string(dim));
  for (std::size_t i = 0; i < v.size(); i += static_cast<std::size_t>(dim))
    pts.push_back(Eigen::Map<const Eigen::VectorXd>(v.data() + i, dim));
  return pts;
}

}  // namespace

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw InputError("'" + tok + "' is not a number");
    }
    if (used != tok.size()) throw InputError("'" + tok + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("expected a comma-separated list of numbers");
  return out;
}

Point parse_point(const std::string& text, int dim) {
  const auto v = parse_numbers(text);
  if (dim >= 0 && static_cast<int>(v.size()) != dim)
    throw InputError("point '" + trim(text) + "' has dimension " + std::to_string(v.size()) + ", expected " +
                     std::to_string(dim));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Path parse_path_spec(const std::string& text, int dim) {
  const std::string t = trim(text);
  const auto colon = t.find(':');
  if (colon == std::string::npos) throw InputError("path '" + t + "' must start with seg:, poly:, loop: or expr:");
  const std::string kind = t.substr(0, colon);
  const std::string body = t.substr(colon + 1);
  if (kind == "seg") {
    std::vector<Point> pts;
    if (body.find(';') != std::string::npos) {
      pts = parse_point_list(body, dim);
    } else {
      const auto v = parse_numbers(body);
      if (v.size() % 2 != 0) throw InputError("segment '" + body + "' needs an even count of numbers");
      pts = parse_point_list(body, dim > 0 ? dim : static_cast<int>(v.size() / 2));
    }
    if (pts.size() != 2) throw InputError("segment needs exactly two points");
    if (dim >= 0 && pts[0].size() != dim) throw InputError("segment dimension mismatch");
    return Path::segment(pts[0], pts[1]);
  }
  if (kind == "poly") {
    auto pts = parse_point_list(body, dim);
    if (pts.size() < 2) throw InputError("polyline needs at least two knots");
    return Path::polyline(std::move(pts));
  }
  if (kind == "loop") {
    const auto v = parse_numbers(body);
    if (v.size() != 3 && v.size() != 4) throw InputError("loop needs cx,cy,r[,winding]");
    if (dim >= 0 && dim != 2) throw InputError("loops are planar");
    Point c(2);
    c << v[0], v[1];
    const double w = v.size() == 4 ? v[3] : 1.0;
    if (w != static_cast<int>(w)) throw InputError("loop winding must be an integer");
    return Path::loop(c, v[2], static_cast<int>(w));
  }
  if (kind == "expr") {
    const auto at = body.rfind('@');
    if (at == std::string::npos) throw InputError("expression path needs '@t0,t1'");
    const auto dom = parse_numbers(body.substr(at + 1));
    if (dom.size() != 2) throw InputError("expression path domain must be t0,t1");
    Path p = Path::expression(body.substr(0, at), dom[0], dom[1]);
    if (dim >= 0 && p.dim() != dim) throw InputError("expression path dimension mismatch");
    return p;
  }
  throw InputError("unknown path kind '" + kind + "'");
}

const std::string* RegistrySection::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

const std::string& RegistrySection::get(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) throw InputError("[" + kind + " " + name + "] is missing '" + key + "'");
  return *v;
}

Registry Registry::parse(const std::string& text, const std::string& origin) {
  Registry reg;
  reg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  static const std::vector<std::string> kinds = {"map", "weight", "path", "implicit"};
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const std::string at = origin + ":" + std::to_string(line) + ": ";
    if (s.front() == '[') {
      if (s.back() != ']') throw InputError(at + "unterminated section header");
      const auto parts = split(trim(s.substr(1, s.size() - 2)), ' ');
      std::vector<std::string> words;
      for (const auto& p : parts)
        if (!p.empty()) words.push_back(p);
      if (words.size() != 2) throw InputError(at + "section header must be [kind name]");
      if (std::find(kinds.begin(), kinds.end(), words[0]) == kinds.end())
        throw InputError(at + "unknown section kind '" + words[0] + "'");
      if (reg.section(words[0], words[1])) throw InputError(at + "duplicate section [" + words[0] + " " + words[1] + "]");
      reg.sections_.push_back(RegistrySection{words[0], words[1], {}, line});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError(at + "expected 'key = value'");
    if (reg.sections_.empty()) throw InputError(at + "entry outside of a section");
    const std::string key = trim(s.substr(0, eq));
    if (reg.sections_.back().find(key)) throw InputError(at + "duplicate key '" + key + "'");
    reg.sections_.back().entries.emplace_back(key, trim(s.substr(eq + 1)));
  }
  return reg;
}

Registry Registry::load(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot read registry file '" + file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), file);
}

std::vector<std::string> Registry::names(const std::string& kind) const {
  std::vector<std::string> out;
  for (const auto& s : sections_)
    if (s.kind == kind) out.push_back(s.name);
  return out;
}

const RegistrySection* Registry::section(const std::string& kind, const std::string& name) const {
  for (const auto& s : sections_)
    if (s.kind == kind && s.name == name) return &s;
  return nullptr;
}

std::string Registry::where(const RegistrySection& s) const {
  return origin_ + ":" + std::to_string(s.line) + ": [" + s.kind + " " + s.name + "] ";
}

MapHandle Registry::map(const std::string& ref) const {
  const RegistrySection* s = section("map", trim(ref));
  if (!s) return resolve_map(ref);
  try {
    MapSpec spec;
    spec.name = s->name;
    spec.text = s->get("components");
    if (const auto* v = s->find("vars")) spec.vars = split_names(*v);
    if (const auto* v = s->find("domain")) spec.domain = parse_space(*v);
    if (const auto* v = s->find("codomain")) spec.codomain = parse_space(*v);
    if (const auto* v = s->find("predicate")) spec.domain_predicate = *v;
    if (const auto* v = s->find("jacobian")) spec.jacobian = *v;
    if (const auto* v = s->find("finite_difference")) spec.finite_difference = (*v == "true" || *v == "1");
    MapHandle h = resolve_map(spec);
    if (const auto* v = s->find("dim_in"))
      if (std::to_string(h.domain().dim()) != *v) throw InputError("dim_in does not match the map");
    if (const auto* v = s->find("dim_out"))
      if (std::to_string(h.codomain().dim()) != *v) throw InputError("dim_out does not match the map");
    return h;
  } catch (const ParseError& e) {
    throw ParseError(where(*s) + e.what(), e.offset(), e.expected());
  } catch (const InputError& e) {
    throw InputError(where(*s) + e.what());
  }
}

Weight Registry::weight(const std::string& ref) const {
  const RegistrySection* s = section("weight", trim(ref));
  if (!s) return parse_weight(ref);
  try {
    if (const auto* e = s->find("expression")) return Weight::expression(*e);
    const std::string& fam = s->get("family");
    auto num = [&](const char* key, double dflt) {
      const auto* v = s->find(key);
      return v ? parse_numbers(*v).at(0) : dflt;
    };
    if (fam == "constant") return Weight::constant(num("c", 1.0));
    if (fam == "affine") return Weight::affine(num("a", 1.0), num("b", 1.0));
    if (fam == "power") return Weight::power(num("a", 1.0), num("b", 1.0), num("gamma", 1.0));
    throw InputError("unknown weight family '" + fam + "'");
  } catch (const InputError& e) {
    throw InputError(where(*s) + e.what());
  }
}

Path Registry::path(const std::string& ref, int dim) const {
  const RegistrySection* s = section("path", trim(ref));
  if (!s) return parse_path_spec(ref, dim);
  try {
    const std::string& kind = s->get("kind");
    Path p = [&]() {
      if (kind == "segment") return Path::segment(parse_point(s->get("a")), parse_point(s->get("b")));
      if (kind == "polyline") return Path::polyline(parse_point_list(s->get("knots"), dim));
      if (kind == "loop") {
        const auto c = parse_point(s->get("center"), 2);
        const double r = parse_numbers(s->get("radius")).at(0);
        const auto* w = s->find("winding");
        return Path::loop(c, r, w ? std::stoi(*w) : 1);
      }
      if (kind == "expression") {
        const auto* t0 = s->find("t0");
        const auto* t1 = s->find("t1");
        return Path::expression(s->get("components"), t0 ? parse_numbers(*t0).at(0) : 0.0,
                                t1 ? parse_numbers(*t1).at(0) : 1.0);
      }
      if (kind == "sampled") {
        auto params = parse_numbers(s->get("params"));
        return Path::sampled(std::move(params), parse_point_list(s->get("knots"), dim));
      }
      throw InputError("unknown path kind '" + kind + "'");
    }();
    if (dim >= 0 && p.dim() != dim) throw InputError("path dimension " + std::to_string(p.dim()) + ", expected " + std::to_string(dim));
    return p;
  } catch (const InputError& e) {
    throw InputError(where(*s) + e.what());
  }
}

ImplicitProblem Registry::implicit(const std::string& ref) const {
  const RegistrySection* s = section("implicit", trim(ref));
  if (!s) throw InputError("no [implicit " + ref + "] section in the registry");
  try {
    const std::string& mref = s->get("map");
    MapHandle f = [&]() {
      if (section("map", mref) || is_builtin(mref)) return map(mref);
      MapSpec spec;
      spec.name = s->name;
      spec.text = mref;
      if (const auto* v = s->find("vars")) spec.vars = split_names(*v);
      return resolve_map(spec);
    }();
    const int x_dim = std::stoi(s->get("x_dim"));
    const auto* w = s->find("w");
    const Point wv = w ? parse_point(*w, f.codomain().dim()) : Point(Point::Zero(f.codomain().dim()));
    return ImplicitProblem::make(std::move(f), x_dim, wv);
  } catch (const InputError& e) {
    throw InputError(where(*s) + e.what());
  } catch (const std::invalid_argument&) {
    throw InputError(where(*s) + "x_dim must be an integer");
  }
}

std::vector<std::string> Registry::validate() const {
  std::vector<std::string> problems;
  for (const auto& s : sections_) {
    try {
      if (s.kind == "map") map(s.name);
      else if (s.kind == "weight") weight(s.name);
      else if (s.kind == "path") path(s.name);
      else if (s.kind == "implicit") implicit(s.name);
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  return problems;
}

}  // namespace liftkit
