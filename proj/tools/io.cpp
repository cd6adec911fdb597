#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "funmean/error.hpp"

namespace funmean::io {

namespace {

using nlohmann::json;

double number(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
  }
  throw InvalidArgument(std::string(what) + ": expected a number or \"inf\"");
}

json number_out(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

json to_json(const GridFn& f) {
  json values = json::array();
  for (double v : f.values()) values.push_back(number_out(v));
  return json{{"lo", f.lo()}, {"hi", f.hi()}, {"values", values}};
}

GridFn grid_fn_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi") || !j.contains("values") || !j["values"].is_array())
    throw InvalidArgument("grid function JSON needs \"lo\", \"hi\" and a \"values\" array");
  std::vector<double> values;
  for (const json& v : j["values"]) values.push_back(number(v, "values"));
  return GridFn(number(j["lo"], "lo"), number(j["hi"], "hi"), std::move(values));
}

json to_json(const Matrix& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) entries.push_back(m(i, k));
  return json{{"d", m.rows()}, {"entries", entries}};
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("entries") || !j["entries"].is_array())
    throw InvalidArgument("matrix JSON needs \"d\" and an \"entries\" array");
  const auto d = j["d"].get<std::size_t>();
  if (d == 0 || j["entries"].size() != d * d) throw InvalidArgument("matrix JSON: entries must hold d*d numbers");
  std::vector<double> data;
  for (const json& v : j["entries"]) {
    const double x = number(v, "entries");
    if (!std::isfinite(x)) throw InvalidArgument("matrix JSON: entries must be finite");
    data.push_back(x);
  }
  return Matrix(d, d, std::move(data));
}

json to_json(const TrialReport& r) {
  json out{{"suite", r.suite_name},
           {"tags", r.tags},
           {"trials", r.trials},
           {"min_margin", number_out(r.min_margin)},
           {"checks", r.checks},
           {"violations", r.violations},
           {"skipped_nodes", r.skipped},
           {"tolerance", r.tolerance},
           {"seed", r.seed},
           {"runtime_ms", r.runtime_ms},
           {"pass", r.passed()}};
  if (!r.first_error.empty()) out["error"] = r.first_error;
  return out;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("'" + path + "': " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

GridFn load_grid_fn(const std::string& path) {
  if (path.size() < 4 || path.substr(path.size() - 4) != ".csv") return grid_fn_from_json(read_json(path));
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::vector<SamplePoint> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::string xs, vs;
    if (!(row >> xs >> vs)) throw InvalidArgument("'" + path + "': expected rows x,value");
    double x = 0.0, v = 0.0;
    try {
      x = std::stod(xs);
    } catch (const std::exception&) {
      if (points.empty()) continue;  // header row
      throw InvalidArgument("'" + path + "': bad abscissa '" + xs + "'");
    }
    try {
      v = std::stod(vs);  // accepts "inf"
    } catch (const std::exception&) {
      throw InvalidArgument("'" + path + "': bad value '" + vs + "'");
    }
    points.push_back({x, v});
  }
  if (points.size() < 2) throw InvalidArgument("'" + path + "': need at least two rows");
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                            [](const SamplePoint& a, const SamplePoint& b) { return a.x < b.x; });
  return convexify(GridSpec{lo->x, hi->x, points.size()}, points);
}

SpdMatrix load_spd(const std::string& path) { return SpdMatrix(matrix_from_json(read_json(path))); }

}  // namespace funmean::io
