#pragma once

// JSON and CSV serialization. Doubles are written in shortest round-trip
// form, so a measure read back from JSON is bitwise equal to the original.

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "riesz/core.hpp"
#include "riesz/error.hpp"

namespace riesz::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal that parses back to exactly `x`.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

/// Rejects keys outside `allowed`, naming the offending key and its context.
inline void require_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw SchemaError(where + ": unknown key \"" + key + "\"");
  }
}

inline double number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + ": expected a number");
  return v.get<double>();
}

inline Point point_from_json(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError(where + ": expected a coordinate array");
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) p[static_cast<Eigen::Index>(k)] = number(v[k], where);
  return p;
}

inline Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < p.size(); ++k) a.push_back(p[k]);
  return a;
}

inline PointSet points_from_json(const Json& v, const std::string& where) {
  if (!v.is_array()) throw SchemaError(where + ": expected an array of points");
  if (v.empty()) return PointSet(0, 0);
  const Point first = point_from_json(v[0], where);
  PointSet out(first.size(), static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Point p = point_from_json(v[j], where);
    if (p.size() != first.size()) throw SchemaError(where + ": points differ in dimension");
    out.col(static_cast<Eigen::Index>(j)) = p;
  }
  return out;
}

inline Json points_to_json(const PointSet& pts) {
  Json a = Json::array();
  for (Eigen::Index j = 0; j < pts.cols(); ++j) a.push_back(point_to_json(pts.col(j)));
  return a;
}

/// {"points": [[x,y,z],...], "weights": [...], "signed": bool}
inline Json measure_to_json(const DiscreteMeasure& mu, bool drop_zero = false) {
  Json pts = Json::array();
  Json w = Json::array();
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    if (drop_zero && mu.weights()[j] == 0.0) continue;
    pts.push_back(point_to_json(mu.point(j)));
    w.push_back(mu.weights()[j]);
  }
  Json out;
  out["points"] = std::move(pts);
  out["weights"] = std::move(w);
  out["signed"] = mu.is_signed();
  return out;
}

inline DiscreteMeasure measure_from_json(const Json& v, int dim, const std::string& where = "measure") {
  require_keys(v, {"points", "weights", "signed"}, where);
  if (!v.contains("points") || !v.contains("weights")) throw SchemaError(where + ": needs \"points\" and \"weights\"");
  PointSet pts = points_from_json(v["points"], where + ".points");
  if (pts.cols() == 0) pts = PointSet(dim, 0);
  if (pts.rows() != dim) throw SchemaError(where + ": points must have dimension " + std::to_string(dim));
  const Json& w = v["weights"];
  if (!w.is_array()) throw SchemaError(where + ".weights: expected an array");
  Eigen::VectorXd weights(static_cast<Eigen::Index>(w.size()));
  for (std::size_t j = 0; j < w.size(); ++j) weights[static_cast<Eigen::Index>(j)] = number(w[j], where + ".weights");
  bool is_signed = false;
  if (v.contains("signed")) {
    if (!v["signed"].is_boolean()) throw SchemaError(where + ".signed: expected a boolean");
    is_signed = v["signed"].get<bool>();
  }
  return {std::move(pts), std::move(weights), is_signed};
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

/// Writes `content` to a sibling temporary file and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

/// Minimal CSV table with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw InvalidArgument("CSV row width differs from header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  std::string str() const {
    std::ostringstream os;
    write_row(os, header_);
    for (const auto& r : rows_) write_row(os, r);
    return os.str();
  }

 private:
  static void write_row(std::ostringstream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      const bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
      if (quote) {
        os << '"';
        for (char c : row[i]) os << (c == '"' ? "\"\"" : std::string(1, c));
        os << '"';
      } else {
        os << row[i];
      }
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace riesz::io
