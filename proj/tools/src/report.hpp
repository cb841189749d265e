#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "liftkit/lift.hpp"

namespace liftkit::cli {

using json = nlohmann::json;

struct Report {
  std::string command;
  json inputs = json::object();
  json results = json::object();
  json verdicts = json::object();
  json tolerances = json::object();
  /// Companion CSV files: file name and contents. Written only with --out.
  std::vector<std::pair<std::string, std::string>> files;
  int exit_code = 0;
};

json to_json(const Point& p);
json to_json(const Verdict& v);
json points_json(const std::vector<Point>& pts);

/// Full document with sorted keys; `files` lists the CSV names when they are written.
json document(const Report& r, std::uint64_t seed, bool with_files);

/// Line-oriented summary for terminals.
std::string summary(const json& doc);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<double>& values);
  std::string str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

/// Columns t, x_1..x_n, residual, d_minus, step.
std::string lift_csv(const LiftTrace& tr);

}  // namespace liftkit::cli
