#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#ifndef LIFTKIT_VERSION
#define LIFTKIT_VERSION "unknown"
#endif

namespace liftkit::cli {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

json to_json(const Verdict& v) {
  json j = {{"kind", v.name()}, {"completed", v.completed()}};
  if (!v.completed()) j["b"] = v.b;
  if (v.kind == VerdictKind::FailedBlowUp) j["last_norm"] = v.last_norm;
  if (v.kind == VerdictKind::FailedSingular) j["d_minus"] = v.d_minus;
  return j;
}

json document(const Report& r, std::uint64_t seed, bool with_files) {
  json d = {{"command", r.command},    {"inputs", r.inputs},         {"results", r.results},
            {"verdicts", r.verdicts},  {"tolerances", r.tolerances}, {"seed", seed},
            {"tool_version", LIFTKIT_VERSION}};
  if (with_files && !r.files.empty()) {
    json f = json::array();
    for (const auto& [name, _] : r.files) f.push_back(name);
    d["files"] = f;
  }
  return d;
}

namespace {

void flatten(std::ostringstream& os, const std::string& key, const json& v, int depth) {
  const std::string text = v.dump();
  if (v.is_string()) {
    os << key << ": " << v.get<std::string>() << "\n";
  } else if (text.size() <= 100) {
    os << key << ": " << text << "\n";
  } else if (v.is_object() && depth < 2) {
    for (const auto& [k, sub] : v.items()) flatten(os, key + "." + k, sub, depth + 1);
  } else {
    os << key << ": (" << v.size() << " entries, see --json)\n";
  }
}

}  // namespace

std::string summary(const json& doc) {
  std::ostringstream os;
  os << "command: " << doc["command"].get<std::string>() << "\n";
  for (const auto& [k, v] : doc["verdicts"].items()) {
    if (v.is_object() && v.contains("kind")) os << "verdict " << k << ": " << v["kind"].get<std::string>() << "\n";
    else os << "verdict " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
  for (const auto& [k, v] : doc["results"].items()) flatten(os, k, v, 0);
  return os.str();
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

Csv& Csv::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < width_; ++i) text_ += (i ? "," : "") + (i < values.size() ? num(values[i]) : "");
  text_ += "\n";
  return *this;
}

std::string lift_csv(const LiftTrace& tr) {
  const Eigen::Index n = tr.nodes.empty() ? 0 : tr.nodes.front().x.size();
  std::vector<std::string> header{"t"};
  for (Eigen::Index i = 0; i < n; ++i) header.push_back("x_" + std::to_string(i + 1));
  for (const char* c : {"residual", "d_minus", "step"}) header.emplace_back(c);
  Csv csv(header);
  for (const auto& node : tr.nodes) {
    std::vector<double> row{node.t};
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(node.x[i]);
    row.insert(row.end(), {node.residual, node.d_minus, node.step});
    csv.row(row);
  }
  return csv.str();
}

}  // namespace liftkit::cli
