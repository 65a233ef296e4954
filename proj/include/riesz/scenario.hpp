#pragma once

// JSON scenarios: parsing with strict key validation, dispatch to the
// library, property and oracle checks, and result/table assembly. The file
// format is documented in docs/scenarios.md.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "riesz/balayage.hpp"
#include "riesz/core.hpp"
#include "riesz/equilibrium.hpp"
#include "riesz/error.hpp"
#include "riesz/green.hpp"
#include "riesz/io.hpp"
#include "riesz/kelvin.hpp"
#include "riesz/region.hpp"
#include "riesz/thinness.hpp"

namespace riesz::cli {

using io::Json;

inline constexpr int kSchemaVersion = 1;

/// Named tolerances; every key may be overridden from the command line.
struct Tolerances {
  std::map<std::string, double> values{
      {"solver", 1e-10},     {"solver_eps", 1e-8}, {"domination", 0.02}, {"oracle", 0.02},
      {"symmetry", 0.02},    {"loss_margin", 0.02}, {"exactness", 1e-12}, {"positivity", 1e-6},
  };

  double operator[](const std::string& key) const { return values.at(key); }

  void set(const std::string& key, double v) {
    auto it = values.find(key);
    if (it == values.end()) throw SchemaError("tolerances: unknown key \"" + key + "\"");
    if (!(v > 0.0) || !std::isfinite(v)) throw SchemaError("tolerances." + key + ": must be a positive number");
    it->second = v;
  }
};

struct RegionSpec {
  Json raw;
  ClosedSet set{std::vector<shape::Primitive>{}};
  Eigen::Index nodes = 2000;
  bool has_budget = false;
  Support support = Support::Auto;
  double truncation_radius = 8.0;
  std::optional<Point> focus;
  double focus_scale = 1.0;
  std::optional<double> cloud_radius;
};

struct OracleEntry {
  std::string name;
  std::string kind;
  std::optional<Point> x;
  std::optional<Point> y;
  Json value;
  std::optional<double> tol;
};

struct Scenario {
  std::string name;
  std::string command;
  double alpha = 2.0;
  int dim = 3;
  std::optional<RegionSpec> region;
  /// Region was given as the domain D; `region` then holds A = D^c.
  bool from_domain = false;
  Json domain_raw;
  std::optional<RegionSpec> targets;
  std::optional<Json> measure;
  std::vector<std::pair<Point, Point>> pairs;
  std::optional<PointSet> grid;
  std::optional<Point> source;
  std::optional<Point> point;
  std::optional<Point> center;
  double q = 0.5;
  int k_max = 8;
  bool at_infinity = false;
  int trials = 100;
  Point sample_center;
  double sample_half_width = 1.0;
  Tolerances tol;
  std::uint64_t seed = 1;
  std::string output;
  std::vector<OracleEntry> oracle;
  std::filesystem::path base_dir;

  KernelSpec kernel() const { return {alpha, dim}; }
};

struct Check {
  std::string name;
  /// "property" or "oracle".
  std::string kind;
  double value = 0.0;
  /// Oracle value; NaN for property checks.
  double reference = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  /// "<=" (value <= tolerance), ">" (value > tolerance) or "rel" (|value - reference| <= tol |reference|).
  std::string op = "<=";
  bool passed = false;
};

struct Outcome {
  Json result;
  /// The checks table, or the shell/grid table for wiener and grid green-eval runs.
  io::CsvTable table{{"check", "kind", "value", "reference", "tolerance", "passed"}};
  bool custom_table = false;
  std::vector<Check> checks;
  bool passed = true;
  /// Largest relative oracle error (refinement tables).
  double max_oracle_error = 0.0;
  double mean_oracle_error = 0.0;
  std::string worst_oracle;
  Eigen::Index node_count = 0;
};

namespace detail {

inline const std::set<std::string> kCommands{"sweep",       "equilibrium", "green-eval", "green-equilibrium",
                                             "kelvin-check", "wiener",      "mass-loss",  "verify-all"};

inline std::string str(const Json& v, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where + ": expected a string");
  return v.get<std::string>();
}

inline double positive(const Json& v, const std::string& where) {
  const double x = io::number(v, where);
  if (!(x > 0.0) || !std::isfinite(x)) throw SchemaError(where + ": must be a positive number");
  return x;
}

inline Eigen::Index count(const Json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 1) throw SchemaError(where + ": must be a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

inline Point sized_point(const Json& v, int dim, const std::string& where) {
  const Point p = io::point_from_json(v, where);
  if (p.size() != dim) throw SchemaError(where + ": expected " + std::to_string(dim) + " coordinates");
  return p;
}

inline shape::Primitive parse_shape(const Json& s, int dim, const std::string& where) {
  if (!s.is_object() || !s.contains("type")) throw SchemaError(where + ": shape needs a \"type\"");
  const std::string type = str(s["type"], where + ".type");
  auto need = [&](const char* key) -> const Json& {
    if (!s.contains(key)) throw SchemaError(where + ": " + type + " needs \"" + key + "\"");
    return s[key];
  };
  if (type == "ball" || type == "ball-complement" || type == "sphere") {
    io::require_keys(s, {"type", "center", "radius"}, where);
    const Point c = sized_point(need("center"), dim, where + ".center");
    const double r = positive(need("radius"), where + ".radius");
    if (type == "ball") return shape::Ball{c, r};
    if (type == "sphere") return shape::Sphere{c, r};
    return shape::BallComplement{c, r};
  }
  if (type == "half-space") {
    io::require_keys(s, {"type", "normal", "offset"}, where);
    const Point n = sized_point(need("normal"), dim, where + ".normal");
    return shape::HalfSpace{n, io::number(need("offset"), where + ".offset")};
  }
  if (type == "shell") {
    io::require_keys(s, {"type", "center", "inner", "outer"}, where);
    return shape::Shell{sized_point(need("center"), dim, where + ".center"), positive(need("inner"), where + ".inner"),
                        positive(need("outer"), where + ".outer")};
  }
  if (type == "cloud") {
    io::require_keys(s, {"type", "points"}, where);
    PointSet pts = io::points_from_json(need("points"), where + ".points");
    if (pts.cols() == 0 || pts.rows() != dim) throw SchemaError(where + ".points: need points of dimension " + std::to_string(dim));
    return shape::Cloud{std::move(pts)};
  }
  throw SchemaError(where + ".type: unknown shape \"" + type + "\"");
}

inline RegionSpec parse_region(const Json& r, int dim, const std::string& where) {
  io::require_keys(r, {"shapes", "nodes", "support", "truncation_radius", "focus", "focus_scale", "cloud_radius"}, where);
  if (!r.contains("shapes") || !r["shapes"].is_array() || r["shapes"].empty()) {
    throw SchemaError(where + ".shapes: expected a non-empty array");
  }
  RegionSpec out;
  out.raw = r;
  std::vector<shape::Primitive> parts;
  for (std::size_t i = 0; i < r["shapes"].size(); ++i) {
    parts.push_back(parse_shape(r["shapes"][i], dim, where + ".shapes[" + std::to_string(i) + "]"));
  }
  try {
    out.set = ClosedSet(std::move(parts));
  } catch (const Error& e) {
    throw SchemaError(where + ".shapes: " + e.what());
  }
  if (r.contains("nodes")) {
    out.nodes = count(r["nodes"], where + ".nodes");
    out.has_budget = true;
  }
  if (r.contains("support")) {
    const std::string s = str(r["support"], where + ".support");
    if (s == "auto") out.support = Support::Auto;
    else if (s == "boundary") out.support = Support::Boundary;
    else if (s == "solid") out.support = Support::Solid;
    else throw SchemaError(where + ".support: expected auto, boundary or solid");
  }
  if (r.contains("truncation_radius")) out.truncation_radius = positive(r["truncation_radius"], where + ".truncation_radius");
  if (r.contains("focus")) out.focus = sized_point(r["focus"], dim, where + ".focus");
  if (r.contains("focus_scale")) out.focus_scale = positive(r["focus_scale"], where + ".focus_scale");
  if (r.contains("cloud_radius")) out.cloud_radius = positive(r["cloud_radius"], where + ".cloud_radius");
  return out;
}

/// A = complement of the open domain D, for the shapes whose complement is a shape.
inline RegionSpec complement_of_domain(const Json& d, int dim) {
  RegionSpec spec = parse_region(d, dim, "domain");
  if (spec.set.parts().size() != 1) throw SchemaError("domain: expected exactly one shape");
  const auto& p = spec.set.parts().front();
  if (const auto* b = std::get_if<shape::Ball>(&p)) {
    spec.set = ClosedSet(shape::BallComplement{b->center, b->radius});
  } else if (const auto* c = std::get_if<shape::BallComplement>(&p)) {
    spec.set = ClosedSet(shape::Ball{c->center, c->radius});
  } else if (const auto* h = std::get_if<shape::HalfSpace>(&p)) {
    spec.set = ClosedSet(shape::HalfSpace{-h->normal, -h->offset});
  } else {
    throw SchemaError("domain: supported domain shapes are ball, ball-complement and half-space");
  }
  return spec;
}

inline std::vector<OracleEntry> parse_oracle(const Json& o, int dim) {
  if (!o.is_array()) throw SchemaError("oracle: expected an array");
  std::vector<OracleEntry> out;
  static const std::set<std::string> kinds{"swept-mass", "potential", "capacity", "green",
                                           "mass-out",   "strict-loss", "classification"};
  for (std::size_t i = 0; i < o.size(); ++i) {
    const std::string where = "oracle[" + std::to_string(i) + "]";
    io::require_keys(o[i], {"name", "kind", "x", "y", "value", "tol"}, where);
    OracleEntry e;
    if (!o[i].contains("kind") || !o[i].contains("value")) throw SchemaError(where + ": needs \"kind\" and \"value\"");
    e.kind = str(o[i]["kind"], where + ".kind");
    if (!kinds.count(e.kind)) throw SchemaError(where + ".kind: unknown oracle kind \"" + e.kind + "\"");
    e.name = o[i].contains("name") ? str(o[i]["name"], where + ".name") : e.kind;
    if (o[i].contains("x")) e.x = sized_point(o[i]["x"], dim, where + ".x");
    if (o[i].contains("y")) e.y = sized_point(o[i]["y"], dim, where + ".y");
    e.value = o[i]["value"];
    if (o[i].contains("tol")) e.tol = positive(o[i]["tol"], where + ".tol");
    if (e.kind == "classification" ? !e.value.is_string()
                                   : e.kind == "strict-loss" ? !e.value.is_boolean() : !e.value.is_number()) {
      throw SchemaError(where + ".value: wrong type for kind " + e.kind);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

/// Validates a scenario document; every error names the offending key.
inline Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  io::require_keys(doc, {"schema", "name", "command", "kernel", "region", "domain", "targets", "measure", "pairs",
                         "grid", "source", "point", "center", "q", "k_max", "at_infinity", "trials", "sample_box",
                         "tolerances", "seed", "output", "oracle"},
                   "scenario");
  if (!doc.contains("schema")) throw SchemaError("schema: missing (expected 1)");
  if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != kSchemaVersion) {
    throw SchemaError("schema: unsupported version (expected 1)");
  }
  Scenario sc;
  sc.base_dir = base_dir;
  if (doc.contains("name")) sc.name = str(doc["name"], "name");
  if (!doc.contains("command")) throw SchemaError("command: missing");
  sc.command = str(doc["command"], "command");
  if (!kCommands.count(sc.command)) throw SchemaError("command: unknown command \"" + sc.command + "\"");

  if (!doc.contains("kernel")) throw SchemaError("kernel: missing");
  io::require_keys(doc["kernel"], {"alpha", "dim"}, "kernel");
  if (!doc["kernel"].contains("alpha") || !doc["kernel"].contains("dim")) throw SchemaError("kernel: needs alpha and dim");
  sc.alpha = io::number(doc["kernel"]["alpha"], "kernel.alpha");
  if (!doc["kernel"]["dim"].is_number_integer()) throw SchemaError("kernel.dim: expected an integer");
  sc.dim = doc["kernel"]["dim"].get<int>();
  try {
    (void)sc.kernel();
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("kernel: ") + e.what());
  }
  sc.sample_center = Point::Zero(sc.dim);

  if (doc.contains("region") && doc.contains("domain")) throw SchemaError("domain: give either region or domain");
  if (doc.contains("region")) sc.region = parse_region(doc["region"], sc.dim, "region");
  if (doc.contains("domain")) {
    sc.region = complement_of_domain(doc["domain"], sc.dim);
    sc.from_domain = true;
    sc.domain_raw = doc["domain"];
  }
  if (doc.contains("targets")) sc.targets = parse_region(doc["targets"], sc.dim, "targets");
  if (doc.contains("measure")) {
    const Json& m = doc["measure"];
    if (m.is_object() && m.contains("file")) {
      io::require_keys(m, {"file"}, "measure");
      const std::filesystem::path p = base_dir / str(m["file"], "measure.file");
      sc.measure = io::read_json_file(p);
    } else {
      sc.measure = m;
    }
    (void)io::measure_from_json(*sc.measure, sc.dim, "measure");
  }
  if (doc.contains("pairs")) {
    if (!doc["pairs"].is_array()) throw SchemaError("pairs: expected an array");
    for (std::size_t i = 0; i < doc["pairs"].size(); ++i) {
      const std::string where = "pairs[" + std::to_string(i) + "]";
      io::require_keys(doc["pairs"][i], {"x", "y"}, where);
      if (!doc["pairs"][i].contains("x") || !doc["pairs"][i].contains("y")) throw SchemaError(where + ": needs x and y");
      sc.pairs.emplace_back(sized_point(doc["pairs"][i]["x"], sc.dim, where + ".x"),
                            sized_point(doc["pairs"][i]["y"], sc.dim, where + ".y"));
    }
  }
  if (doc.contains("grid")) {
    PointSet g = io::points_from_json(doc["grid"], "grid");
    if (g.cols() == 0 || g.rows() != sc.dim) throw SchemaError("grid: need points of dimension " + std::to_string(sc.dim));
    sc.grid = std::move(g);
  }
  if (doc.contains("source")) sc.source = sized_point(doc["source"], sc.dim, "source");
  if (doc.contains("point")) sc.point = sized_point(doc["point"], sc.dim, "point");
  if (doc.contains("center")) sc.center = sized_point(doc["center"], sc.dim, "center");
  if (doc.contains("q")) {
    sc.q = io::number(doc["q"], "q");
    if (!(sc.q > 0.0 && sc.q < 1.0)) throw SchemaError("q: must lie in (0,1)");
  }
  if (doc.contains("k_max")) sc.k_max = static_cast<int>(count(doc["k_max"], "k_max"));
  if (doc.contains("at_infinity")) {
    if (!doc["at_infinity"].is_boolean()) throw SchemaError("at_infinity: expected a boolean");
    sc.at_infinity = doc["at_infinity"].get<bool>();
  }
  if (doc.contains("trials")) sc.trials = static_cast<int>(count(doc["trials"], "trials"));
  if (doc.contains("sample_box")) {
    io::require_keys(doc["sample_box"], {"center", "half_width"}, "sample_box");
    if (doc["sample_box"].contains("center")) sc.sample_center = sized_point(doc["sample_box"]["center"], sc.dim, "sample_box.center");
    if (doc["sample_box"].contains("half_width")) sc.sample_half_width = positive(doc["sample_box"]["half_width"], "sample_box.half_width");
  }
  if (doc.contains("tolerances")) {
    if (!doc["tolerances"].is_object()) throw SchemaError("tolerances: expected an object");
    for (const auto& [k, v] : doc["tolerances"].items()) sc.tol.set(k, io::number(v, "tolerances." + k));
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0)) {
      throw SchemaError("seed: expected a non-negative integer");
    }
    sc.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output")) sc.output = str(doc["output"], "output");
  if (doc.contains("oracle")) sc.oracle = parse_oracle(doc["oracle"], sc.dim);

  // Per-command requirements.
  auto require = [&](bool ok, const std::string& key) {
    if (!ok) throw SchemaError(key + ": required by command " + sc.command);
  };
  const std::string& c = sc.command;
  if (c != "kelvin-check") require(sc.region.has_value(), sc.command.rfind("green", 0) == 0 || c == "verify-all" ? "domain" : "region");
  if (c == "green-eval" || c == "green-equilibrium" || c == "verify-all") require(sc.from_domain, "domain");
  if (c == "sweep" || c == "mass-loss") require(sc.measure.has_value(), "measure");
  if (c == "green-eval") require(!sc.pairs.empty() || (sc.grid && sc.source), "pairs");
  if (c == "green-equilibrium") require(sc.targets.has_value(), "targets");
  if (c == "wiener") require(sc.point.has_value(), "point");
  if (c == "kelvin-check") require(sc.center.has_value(), "center");

  static const std::map<std::string, std::set<std::string>> allowed_oracles{
      {"sweep", {"swept-mass", "potential"}},
      {"equilibrium", {"capacity", "potential"}},
      {"green-eval", {"green"}},
      {"green-equilibrium", {"capacity"}},
      {"kelvin-check", {}},
      {"wiener", {"classification"}},
      {"mass-loss", {"mass-out", "strict-loss"}},
      {"verify-all", {"green", "swept-mass", "capacity"}},
  };
  for (const auto& e : sc.oracle) {
    if (!allowed_oracles.at(c).count(e.kind)) {
      throw SchemaError("oracle: kind \"" + e.kind + "\" does not apply to command " + c);
    }
    if ((e.kind == "potential" && !e.x) || (e.kind == "green" && (!e.x || !e.y)) ||
        (e.kind == "swept-mass" && c == "verify-all" && !e.x)) {
      throw SchemaError("oracle: entry \"" + e.name + "\" is missing its point coordinates");
    }
  }
  return sc;
}

namespace detail {

inline Region build_region(const KernelSpec& spec, const RegionSpec& rs, const std::string& label) {
  bool all_cloud = true;
  Eigen::Index total = 0;
  for (const auto& p : rs.set.parts()) {
    if (const auto* c = std::get_if<shape::Cloud>(&p)) total += c->points.cols();
    else all_cloud = false;
  }
  if (all_cloud) {
    PointSet pts(spec.dim(), total);
    Eigen::Index at = 0;
    for (const auto& p : rs.set.parts()) {
      const auto& c = std::get<shape::Cloud>(p);
      pts.middleCols(at, c.points.cols()) = c.points;
      at += c.points.cols();
    }
    return cloud_region(spec, std::move(pts), rs.cloud_radius, label);
  }
  DiscretizationOptions o;
  o.nodes = rs.nodes;
  o.support = rs.support;
  o.truncation_radius = rs.truncation_radius;
  o.focus = rs.focus;
  o.focus_scale = rs.focus_scale;
  return discretize(spec, rs.set, o, label);
}

class Recorder {
 public:
  explicit Recorder(Outcome& out) : out_(out) {}

  void at_most(const std::string& name, double value, double limit) {
    push({name, "property", value, std::numeric_limits<double>::quiet_NaN(), limit, "<=", value <= limit});
  }

  void above(const std::string& name, double value, double limit) {
    push({name, "property", value, std::numeric_limits<double>::quiet_NaN(), limit, ">", value > limit});
  }

  void holds(const std::string& name, bool ok) {
    push({name, "property", ok ? 1.0 : 0.0, 1.0, 0.0, "rel", ok});
  }

  void oracle(const std::string& name, double value, double reference, double tol) {
    const double err = reference == 0.0 ? std::abs(value) : std::abs(value - reference) / std::abs(reference);
    push({name, "oracle", value, reference, tol, "rel", err <= tol});
    errors_.push_back(err);
    if (errors_.size() == 1 || err > out_.max_oracle_error) {
      out_.max_oracle_error = err;
      out_.worst_oracle = name;
    }
  }

  void oracle_match(const std::string& name, bool ok) {
    push({name, "oracle", ok ? 1.0 : 0.0, 1.0, 0.0, "rel", ok});
    errors_.push_back(ok ? 0.0 : 1.0);
    if (!ok && out_.max_oracle_error < 1.0) {
      out_.max_oracle_error = 1.0;
      out_.worst_oracle = name;
    }
  }

  void finish() {
    if (!errors_.empty()) {
      double s = 0.0;
      for (double e : errors_) s += e;
      out_.mean_oracle_error = s / static_cast<double>(errors_.size());
    }
    Json arr = Json::array();
    for (const auto& c : out_.checks) {
      Json j;
      j["name"] = c.name;
      j["kind"] = c.kind;
      j["value"] = c.value;
      j["reference"] = std::isnan(c.reference) ? Json(nullptr) : Json(c.reference);
      j["tolerance"] = c.tolerance;
      j["op"] = c.op;
      j["passed"] = c.passed;
      arr.push_back(std::move(j));
      if (!out_.custom_table) out_.table.add({c.name, c.kind, io::format_double(c.value), std::isnan(c.reference) ? "" : io::format_double(c.reference),
                      io::format_double(c.tolerance), c.passed ? "true" : "false"});
    }
    out_.result["checks"] = std::move(arr);
    out_.result["passed"] = out_.passed;
  }

 private:
  void push(Check c) {
    out_.passed = out_.passed && c.passed;
    out_.checks.push_back(std::move(c));
  }

  Outcome& out_;
  std::vector<double> errors_;
};

inline double oracle_tol(const Scenario& sc, const OracleEntry& e) { return e.tol ? *e.tol : sc.tol["oracle"]; }

inline Json region_summary(const Region& r) {
  Json j;
  j["label"] = r.info().label;
  j["nodes"] = r.size();
  j["support"] = r.info().support;
  j["truncation_radius"] = r.info().truncation_radius ? Json(*r.info().truncation_radius) : Json(nullptr);
  return j;
}

inline Json stats_json(const PotentialStats& s) {
  Json j;
  j["min"] = s.min;
  j["max"] = s.max;
  j["mean"] = s.mean;
  j["count"] = s.count;
  return j;
}

inline SweepOptions sweep_options(const Scenario& sc) {
  SweepOptions o;
  o.solver.tol = sc.tol["solver"];
  o.solver_eps = sc.tol["solver_eps"];
  o.domination_tol = sc.tol["domination"];
  o.probe_seed = sc.seed;
  return o;
}

inline PointSet random_domain_points(const GreenKernel& gk, const Scenario& sc, Eigen::Index count, std::uint64_t seed) {
  const Point lo = sc.sample_center.array() - sc.sample_half_width;
  const Point hi = sc.sample_center.array() + sc.sample_half_width;
  return domain_points(gk, count, seed, lo, hi);
}

inline DiscreteMeasure random_measure(const std::function<PointSet(Eigen::Index, std::uint64_t)>& place, Eigen::Index size,
                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PointSet pts = place(size, rng());
  Eigen::VectorXd w(size);
  for (Eigen::Index j = 0; j < size; ++j) w[j] = 0.05 + unit(rng);
  return {pts, w / w.sum()};
}

// ---------------------------------------------------------------------------
// Commands

inline void run_sweep(const Scenario& sc, Outcome& out, Recorder& rec) {
  const KernelSpec spec = sc.kernel();
  const Sweeper sweeper(spec, build_region(spec, *sc.region, "A"));
  out.node_count = sweeper.region().size();
  const DiscreteMeasure mu = io::measure_from_json(*sc.measure, sc.dim);
  const SweepOptions so = sweep_options(sc);
  Json& r = out.result;
  r["region"] = region_summary(sweeper.region());
  if (mu.is_signed()) {
    const SignedSweepResult s = sweeper.sweep_signed(mu, so);
    r["swept"] = io::measure_to_json(s.swept, true);
    r["mass_in"] = mu.total_mass();
    r["mass_out"] = s.swept.total_mass();
    for (const auto* part : {&s.positive, &s.negative}) {
      const char* tag = part == &s.positive ? "positive" : "negative";
      rec.holds(std::string("mass-inequality-") + tag, part->checks.mass_ok);
      rec.holds(std::string("energy-inequality-") + tag, part->checks.energy_ok);
    }
    return;
  }
  const SweepResult s = sweeper.sweep(mu, so);
  r["swept"] = io::measure_to_json(s.swept, true);
  r["fixed_point"] = sweeper.on_nodes(mu).has_value();
  Json d;
  d["mass_in"] = s.mass_in;
  d["mass_out"] = s.mass_out;
  d["energy_in"] = s.energy_in;
  d["energy_out"] = s.energy_out;
  d["kkt_residual"] = s.solution.kkt_residual;
  d["iterations"] = s.solution.iterations;
  d["used_fallback"] = s.solution.used_fallback;
  d["equality_gap"] = s.checks.equality_gap;
  d["domination_excess"] = s.checks.domination_excess;
  d["probe_count"] = s.checks.probe_count;
  d["probe_violations"] = s.checks.probe_violations;
  d["probe_seed"] = s.checks.probe_seed;
  r["diagnostics"] = std::move(d);
  rec.holds("mass-inequality", s.checks.mass_ok);
  rec.holds("energy-inequality", s.checks.energy_ok);
  rec.at_most("potential-domination-violations", static_cast<double>(s.checks.probe_violations), 0.0);
  rec.at_most("potential-equality-gap", s.checks.equality_gap, sc.tol["domination"]);
  for (const auto& e : sc.oracle) {
    if (e.kind == "swept-mass") {
      const double m = e.x ? sweeper.sweep(DiscreteMeasure::dirac(*e.x), so).mass_out : s.mass_out;
      rec.oracle(e.name, m, e.value.get<double>(), oracle_tol(sc, e));
    } else {
      rec.oracle(e.name, potential(spec, s.swept, *e.x), e.value.get<double>(), oracle_tol(sc, e));
    }
  }
}

inline void run_equilibrium(const Scenario& sc, Outcome& out, Recorder& rec) {
  const KernelSpec spec = sc.kernel();
  const Sweeper sweeper(spec, build_region(spec, *sc.region, "A"));
  out.node_count = sweeper.region().size();
  EquilibriumOptions eo;
  eo.solver.tol = sc.tol["solver"];
  eo.probe_seed = sc.seed;
  eo.tol = sc.tol["domination"];
  const EquilibriumResult eq = riesz_equilibrium(sweeper, eo);
  Json& r = out.result;
  r["region"] = region_summary(sweeper.region());
  r["capacity"] = eq.capacity;
  r["min_energy"] = eq.min_energy;
  r["gamma"] = io::measure_to_json(eq.gamma, true);
  r["potential_stats"] = stats_json(eq.potential_stats);
  r["charged_stats"] = stats_json(eq.charged_stats);
  r["probe_stats"] = stats_json(eq.probe_stats);
  Json f;
  f["competitors"] = eq.minimality.competitors;
  f["worst"] = eq.minimality.worst;
  f["holds"] = eq.minimality.holds;
  r["feasibility_checks"] = std::move(f);
  const double pinch = std::max(std::abs(eq.charged_stats.max - 1.0), std::abs(eq.charged_stats.min - 1.0));
  rec.at_most("equilibrium-pinch", pinch, sc.tol["domination"]);
  rec.at_most("exterior-potential-excess", eq.probe_stats.max - 1.0, sc.tol["domination"]);
  rec.at_most("minimal-potential", eq.minimality.worst, sc.tol["domination"]);
  for (const auto& e : sc.oracle) {
    const double v = e.kind == "capacity" ? eq.capacity : potential(spec, eq.gamma, *e.x);
    rec.oracle(e.name, v, e.value.get<double>(), oracle_tol(sc, e));
  }
}

inline GreenOptions green_options(const Scenario& sc) {
  GreenOptions go;
  go.solver.tol = sc.tol["solver"];
  return go;
}

inline void run_green_eval(const Scenario& sc, Outcome& out, Recorder& rec) {
  const KernelSpec spec = sc.kernel();
  const GreenKernel gk(spec, build_region(spec, *sc.region, "complement"), green_options(sc));
  out.node_count = gk.complement().size();
  Json& r = out.result;
  r["domain"] = sc.domain_raw;
  r["alpha"] = sc.alpha;
  r["complement"] = region_summary(gk.complement());
  double sym = 0.0;
  double neg = 0.0;
  if (!sc.pairs.empty()) {
    Json vals = Json::array();
    for (const auto& [x, y] : sc.pairs) {
      const double gxy = gk.eval(x, y);
      const double gyx = gk.eval(y, x);
      sym = std::max(sym, std::abs(gxy - gyx) / std::max(std::abs(gxy), std::abs(gyx)));
      neg = std::max(neg, -std::min(gxy, gyx));
      Json v;
      v["x"] = io::point_to_json(x);
      v["y"] = io::point_to_json(y);
      v["g_xy"] = gxy;
      v["g_yx"] = gyx;
      vals.push_back(std::move(v));
    }
    r["pairs"] = std::move(vals);
  }
  if (sc.grid) {
    r["source"] = io::point_to_json(*sc.source);
    r["grid"] = io::points_to_json(*sc.grid);
    Json vals = Json::array();
    std::vector<std::string> header;
    for (int k = 0; k < sc.dim; ++k) header.push_back("x" + std::to_string(k));
    header.emplace_back("value");
    io::CsvTable grid(header);
    for (Eigen::Index i = 0; i < sc.grid->cols(); ++i) {
      const double g = gk.eval(sc.grid->col(i), *sc.source);
      neg = std::max(neg, -g);
      vals.push_back(g);
      std::vector<std::string> row;
      for (int k = 0; k < sc.dim; ++k) row.push_back(io::format_double((*sc.grid)(k, i)));
      row.push_back(io::format_double(g));
      grid.add(std::move(row));
    }
    r["values"] = std::move(vals);
    out.table = std::move(grid);
    out.custom_table = true;
  }
  rec.at_most("green-symmetry", sym, sc.tol["symmetry"]);
  rec.at_most("green-positivity", neg, sc.tol["positivity"]);
  for (const auto& e : sc.oracle) rec.oracle(e.name, gk.eval(*e.x, *e.y), e.value.get<double>(), oracle_tol(sc, e));
}

inline void green_equilibrium_checks(const Scenario& sc, const GreenKernel& gk, Outcome& out, Recorder& rec,
                                     Json& target) {
  const Region f = build_region(sc.kernel(), *sc.targets, "F");
  EquilibriumOptions eo;
  eo.solver.tol = sc.tol["solver"];
  eo.probe_seed = sc.seed;
  eo.tol = sc.tol["domination"];
  const EquilibriumResult eq = green_equilibrium(gk, f.nodes(), f.reg_radii(), eo);
  target["targets"] = region_summary(f);
  target["capacity"] = eq.capacity;
  target["min_energy"] = eq.min_energy;
  target["gamma"] = io::measure_to_json(eq.gamma, true);
  target["potential_stats"] = stats_json(eq.potential_stats);
  target["charged_stats"] = stats_json(eq.charged_stats);
  Json fc;
  fc["competitors"] = eq.minimality.competitors;
  fc["worst"] = eq.minimality.worst;
  fc["holds"] = eq.minimality.holds;
  target["feasibility_checks"] = std::move(fc);
  const double pinch = std::max(std::abs(eq.charged_stats.max - 1.0), std::abs(eq.charged_stats.min - 1.0));
  rec.at_most("green-equilibrium-pinch", pinch, sc.tol["domination"]);
  rec.at_most("green-equilibrium-minimality", eq.minimality.worst, sc.tol["domination"]);
  for (const auto& e : sc.oracle) {
    if (e.kind == "capacity") rec.oracle(e.name, eq.capacity, e.value.get<double>(), oracle_tol(sc, e));
  }
  (void)out;
}

inline void run_green_equilibrium(const Scenario& sc, Outcome& out, Recorder& rec) {
  const KernelSpec spec = sc.kernel();
  const GreenKernel gk(spec, build_region(spec, *sc.region, "complement"), green_options(sc));
  out.node_count = gk.complement().size();
  out.result["complement"] = region_summary(gk.complement());
  Json target;
  green_equilibrium_checks(sc, gk, out, rec, target);
  for (auto& [k, v] : target.items()) out.result[k] = v;
}

struct KelvinErrors {
  double involution = 0.0;
  double weight_law = 0.0;
  double covariance = 0.0;
  double energy = 0.0;
  double mass = 0.0;
};

inline KelvinErrors kelvin_errors(const KernelSpec& spec, const Point& y, int trials, std::uint64_t seed) {
  const Inversion inv(y);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.05, 1.0);
  const int dim = spec.dim();
  KelvinErrors e;
  auto cloud = [&](Eigen::Index m, double shift) {
    PointSet p(dim, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Point d(dim);
      for (int k = 0; k < dim; ++k) d[k] = unit(rng);
      p.col(j) = y + d.normalized() * (0.2 + shift + 2.0 * (unit(rng) + 1.0));
    }
    Eigen::VectorXd w(m);
    for (Eigen::Index j = 0; j < m; ++j) w[j] = pos(rng);
    return DiscreteMeasure(p, w);
  };
  for (int t = 0; t < trials; ++t) {
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 50);
    const DiscreteMeasure nu = cloud(m, 0.0);
    const DiscreteMeasure mu = cloud(1 + static_cast<Eigen::Index>(rng() % 20), 0.01);
    const DiscreteMeasure image = kelvin_transform(inv, spec, nu);
    const DiscreteMeasure back = kelvin_transform(inv, spec, image);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Point x = nu.point(j);
      e.involution = std::max(e.involution, (back.point(j) - x).norm() / x.norm());
      e.involution = std::max(e.involution, std::abs(back.weights()[j] - nu.weights()[j]) / nu.weights()[j]);
      const double r = (x - y).norm();
      const double expect = nu.weights()[j] * std::pow(r, spec.alpha() - dim);
      e.weight_law = std::max(e.weight_law, std::abs(image.weights()[j] - expect) / expect);
      e.weight_law = std::max(e.weight_law, std::abs((image.point(j) - y).norm() * r - 1.0));
    }
    PointSet samples(dim, 5);
    for (Eigen::Index s = 0; s < 5; ++s) {
      Point d(dim);
      for (int k = 0; k < dim; ++k) d[k] = unit(rng);
      samples.col(s) = y + d.normalized() * (0.1 + 3.0 * (unit(rng) + 1.0));
    }
    e.covariance = std::max(e.covariance, verify_potential_covariance(inv, spec, nu, samples));
    e.energy = std::max(e.energy, verify_energy_invariance(inv, spec, mu, nu));
    e.mass = std::max(e.mass, verify_mass_identity(inv, spec, nu));
  }
  return e;
}

inline void kelvin_checks(const Scenario& sc, const Point& center, int trials, Recorder& rec, Json& r) {
  const KelvinErrors e = kelvin_errors(sc.kernel(), center, trials, sc.seed);
  const double tol = sc.tol["exactness"];
  Json j;
  j["trials"] = trials;
  j["involution"] = e.involution;
  j["weight_law"] = e.weight_law;
  j["potential_covariance"] = e.covariance;
  j["energy_invariance"] = e.energy;
  j["mass_identity"] = e.mass;
  r["kelvin"] = std::move(j);
  rec.at_most("kelvin-involution", e.involution, tol);
  rec.at_most("kelvin-weight-law", e.weight_law, tol);
  rec.at_most("kelvin-potential-covariance", e.covariance, tol);
  rec.at_most("kelvin-energy-invariance", e.energy, tol);
  rec.at_most("kelvin-mass-identity", e.mass, tol);
}

inline void run_kelvin(const Scenario& sc, Outcome& out, Recorder& rec) {
  Json& r = out.result;
  kelvin_checks(sc, *sc.center, sc.trials, rec, r);
  if (sc.measure) {
    const KernelSpec spec = sc.kernel();
    const Inversion inv(*sc.center);
    const DiscreteMeasure nu = io::measure_from_json(*sc.measure, sc.dim);
    const DiscreteMeasure image = kelvin_transform(inv, spec, nu);
    r["image"] = io::measure_to_json(image);
    rec.at_most("measure-mass-identity", verify_mass_identity(inv, spec, nu), sc.tol["exactness"]);
  }
}

inline void run_wiener(const Scenario& sc, Outcome& out, Recorder& rec) {
  const KernelSpec spec = sc.kernel();
  WienerOptions wo;
  wo.solver.tol = sc.tol["solver"];
  const WienerReport rep = sc.at_infinity ? wiener_at_infinity(spec, sc.region->set, *sc.point, sc.q, sc.k_max, wo)
                                          : wiener_report(spec, sc.region->set, *sc.point, sc.q, sc.k_max, wo);
  Json& r = out.result;
  r["point"] = io::point_to_json(rep.point);
  r["at_infinity"] = sc.at_infinity;
  r["q"] = rep.ratio_q;
  r["classification"] = to_string(rep.classification);
  r["fitted_ratio"] = rep.fitted_ratio;
  r["term_floor"] = rep.term_floor;
  r["empty_shell_run"] = rep.empty_shell_run;
  Json th;
  th["tail"] = wo.tail;
  th["ratio_cutoff"] = wo.ratio_cutoff;
  th["floor_factor"] = wo.floor_factor;
  r["thresholds"] = std::move(th);
  Json shells = Json::array();
  io::CsvTable table({"k", "node_count", "capacity", "term"});
  for (const auto& s : rep.shells) {
    Json j;
    j["k"] = s.k;
    j["node_count"] = s.node_count;
    j["capacity"] = s.capacity;
    j["term"] = s.term;
    shells.push_back(std::move(j));
    table.add({std::to_string(s.k), std::to_string(s.node_count), io::format_double(s.capacity), io::format_double(s.term)});
    out.node_count = std::max(out.node_count, s.node_count);
  }
  r["shells"] = std::move(shells);
  out.table = std::move(table);
  out.custom_table = true;
  bool ok = true;
  for (const auto& s : rep.shells) ok = ok && s.term >= 0.0;
  rec.holds("terms-nonnegative", ok);
  for (const auto& e : sc.oracle) rec.oracle_match(e.name, e.value.get<std::string>() == to_string(rep.classification));
}

inline void run_mass_loss(const Scenario& sc, Outcome& out, Recorder& rec) {
  const KernelSpec spec = sc.kernel();
  const DiscreteMeasure mu = io::measure_from_json(*sc.measure, sc.dim);
  Json& r = out.result;
  MassLossResult m;
  const bool has_cloud = std::any_of(sc.region->set.parts().begin(), sc.region->set.parts().end(),
                                     [](const auto& p) { return std::holds_alternative<shape::Cloud>(p); });
  if (sc.region->set.is_bounded() || has_cloud) {
    const Sweeper sweeper(spec, build_region(spec, *sc.region, "A"));
    out.node_count = sweeper.region().size();
    r["region"] = region_summary(sweeper.region());
    m = mass_loss_test(sweeper, mu, sc.tol["loss_margin"], sweep_options(sc));
  } else {
    DiscretizationOptions o;
    o.nodes = sc.region->nodes;
    o.support = sc.region->support;
    o.truncation_radius = sc.region->truncation_radius;
    o.focus = sc.region->focus;
    o.focus_scale = sc.region->focus_scale;
    m = mass_loss_test(spec, sc.region->set, mu, o, sc.tol["loss_margin"], sweep_options(sc));
    DiscretizationOptions last = o;
    last.truncation_radius = m.truncation_radii.back();
    const Region region = discretize(spec, sc.region->set, last, "A");
    out.node_count = region.size();
    r["region"] = region_summary(region);
  }
  r["mass_in"] = m.mass_in;
  r["mass_out"] = m.mass_out;
  r["mass_out_raw"] = m.mass_out_raw;
  if (!m.truncation_radii.empty()) {
    Json t;
    t["radii"] = m.truncation_radii;
    t["tail_exponent"] = m.tail_exponent;
    r["truncation_extrapolation"] = std::move(t);
  }
  r["strict_loss"] = m.strict_loss;
  r["loss_margin"] = m.loss_margin;
  r["thin_at_infinity_expected"] = sc.region->set.is_bounded();
  rec.at_most("mass-inequality", m.mass_out_raw - m.mass_in * (1.0 + sc.tol["solver_eps"]), 0.0);
  for (const auto& e : sc.oracle) {
    if (e.kind == "mass-out") rec.oracle(e.name, m.mass_out, e.value.get<double>(), oracle_tol(sc, e));
    else rec.oracle_match(e.name, e.value.get<bool>() == m.strict_loss);
  }
}

inline void run_verify_all(const Scenario& sc, Outcome& out, Recorder& rec) {
  const KernelSpec spec = sc.kernel();
  const GreenKernel gk(spec, build_region(spec, *sc.region, "complement"), green_options(sc));
  out.node_count = gk.complement().size();
  Json& r = out.result;
  r["domain"] = sc.domain_raw;
  r["complement"] = region_summary(gk.complement());
  std::mt19937_64 rng(sc.seed);
  auto place = [&](Eigen::Index n, std::uint64_t seed) { return random_domain_points(gk, sc, n, seed); };

  kelvin_checks(sc, sc.sample_center, std::min(sc.trials, 20), rec, r);

  // Sweeps of random sources in D onto A.
  const SweepOptions so = sweep_options(sc);
  double mass_excess = -kInfinity, energy_excess = -kInfinity, dom = 0.0;
  Eigen::Index violations = 0;
  for (int t = 0; t < 6; ++t) {
    const DiscreteMeasure mu = random_measure(place, t < 5 ? 1 : 5, rng);
    const SweepResult s = gk.sweeper().sweep(mu, so);
    mass_excess = std::max(mass_excess, s.mass_out / s.mass_in - 1.0);
    energy_excess = std::max(energy_excess, s.energy_out / s.energy_in - 1.0);
    dom = std::max(dom, s.checks.domination_excess);
    violations += s.checks.probe_violations;
  }
  rec.at_most("sweep-mass-inequality", mass_excess, sc.tol["solver_eps"]);
  rec.at_most("sweep-energy-inequality", energy_excess, sc.tol["solver_eps"]);
  rec.at_most("sweep-domination-violations", static_cast<double>(violations), 0.0);

  // Green kernel symmetry and positivity on random pairs.
  const PointSet xs = place(20, rng());
  const PointSet ys = place(20, rng());
  double sym = 0.0, neg = 0.0;
  for (Eigen::Index i = 0; i < xs.cols(); ++i) {
    const double a = gk.eval(xs.col(i), ys.col(i));
    const double b = gk.eval(ys.col(i), xs.col(i));
    sym = std::max(sym, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    neg = std::max(neg, -std::min(a, b));
  }
  rec.at_most("green-symmetry", sym, sc.tol["symmetry"]);
  rec.at_most("green-positivity", neg, sc.tol["positivity"]);

  // Strict positive definiteness of the Green Gram matrix.
  const PointSet cloud = place(50, rng());
  const GreenGram gg = gk.gram(cloud);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gg.gram.entries(), Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  rec.above("green-gram-min-eigenvalue", min_eig, 0.0);

  // Energy decomposition and the two Green-potential routes.
  double decomposition = 0.0, route = 0.0;
  for (int t = 0; t < 5; ++t) {
    const DiscreteMeasure nu = random_measure(place, 10, rng);
    decomposition = std::max(decomposition, verify_energy_decomposition(gk, nu));
    const PointSet at = place(3, rng());
    for (Eigen::Index p = 0; p < at.cols(); ++p) route = std::max(route, gk.potential_at(nu, at.col(p)).route_gap);
  }
  rec.at_most("green-energy-decomposition", decomposition, sc.tol["symmetry"]);
  rec.at_most("green-potential-routes", route, sc.tol["symmetry"]);

  if (sc.targets) {
    Json target;
    green_equilibrium_checks(sc, gk, out, rec, target);
    target.erase("gamma");
    r["green_equilibrium"] = std::move(target);
  }
  for (const auto& e : sc.oracle) {
    if (e.kind == "green") {
      rec.oracle(e.name, gk.eval(*e.x, *e.y), e.value.get<double>(), oracle_tol(sc, e));
    } else if (e.kind == "swept-mass") {
      rec.oracle(e.name, gk.sweeper().sweep(DiscreteMeasure::dirac(*e.x), so).mass_out, e.value.get<double>(),
                 oracle_tol(sc, e));
    }
  }
}

}  // namespace detail

/// Runs a validated scenario. Library errors propagate as exceptions.
inline Outcome execute(const Scenario& sc) {
  Outcome out;
  Json& r = out.result;
  r["schema"] = kSchemaVersion;
  r["name"] = sc.name;
  r["command"] = sc.command;
  Json k;
  k["alpha"] = sc.alpha;
  k["dim"] = sc.dim;
  r["kernel"] = std::move(k);
  r["seed"] = sc.seed;
  Json tol;
  for (const auto& [key, v] : sc.tol.values) tol[key] = v;
  r["tolerances"] = std::move(tol);
  detail::Recorder rec(out);
  const std::string& c = sc.command;
  if (c == "sweep") detail::run_sweep(sc, out, rec);
  else if (c == "equilibrium") detail::run_equilibrium(sc, out, rec);
  else if (c == "green-eval") detail::run_green_eval(sc, out, rec);
  else if (c == "green-equilibrium") detail::run_green_equilibrium(sc, out, rec);
  else if (c == "kelvin-check") detail::run_kelvin(sc, out, rec);
  else if (c == "wiener") detail::run_wiener(sc, out, rec);
  else if (c == "mass-loss") detail::run_mass_loss(sc, out, rec);
  else detail::run_verify_all(sc, out, rec);
  rec.finish();
  return out;
}

/// Scenario with the node budget of its region (and targets) replaced.
inline Scenario with_node_budget(Scenario sc, Eigen::Index n) {
  if (!sc.region || !sc.region->has_budget) throw SchemaError("region.nodes: scenario has no node budget to refine");
  sc.region->nodes = n;
  if (sc.targets) sc.targets->nodes = std::max<Eigen::Index>(1, n / 4);
  return sc;
}

/// Built-in scenario library, keyed by name.
inline const std::map<std::string, Json>& builtin_scenarios() {
  static const std::map<std::string, Json> lib = [] {
    std::map<std::string, Json> m;
    m["ball-newtonian"] = Json::parse(R"({
      "schema": 1, "name": "ball-newtonian", "command": "verify-all",
      "kernel": {"alpha": 2, "dim": 3},
      "domain": {"shapes": [{"type": "ball", "center": [0, 0, 0], "radius": 1}], "nodes": 2000},
      "targets": {"shapes": [{"type": "sphere", "center": [0, 0, 0], "radius": 0.5}], "nodes": 500},
      "seed": 1,
      "oracle": [
        {"name": "green-center-value", "kind": "green", "x": [0.5, 0, 0], "y": [0, 0, 0], "value": 1.0},
        {"name": "green-quarter-value", "kind": "green", "x": [0, 0.25, 0], "y": [0, 0, 0], "value": 3.0},
        {"name": "green-three-quarter-value", "kind": "green", "x": [0, 0, 0.75], "y": [0, 0, 0], "value": 0.3333333333333333},
        {"name": "swept-center-mass", "kind": "swept-mass", "x": [0, 0, 0], "value": 1.0},
        {"name": "green-capacity-half-sphere", "kind": "capacity", "value": 1.0}
      ]})");
    m["sweep-center-to-exterior"] = Json::parse(R"({
      "schema": 1, "name": "sweep-center-to-exterior", "command": "sweep",
      "kernel": {"alpha": 2, "dim": 3},
      "region": {"shapes": [{"type": "ball-complement", "center": [0, 0, 0], "radius": 1}], "nodes": 2000},
      "measure": {"points": [[0, 0, 0]], "weights": [1]},
      "seed": 1,
      "oracle": [
        {"name": "swept-mass", "kind": "swept-mass", "value": 1.0, "tol": 0.01},
        {"name": "potential-r1.5", "kind": "potential", "x": [1.5, 0, 0], "value": 0.6666666666666666, "tol": 0.01},
        {"name": "potential-r2", "kind": "potential", "x": [0, 2, 0], "value": 0.5, "tol": 0.01},
        {"name": "potential-r3", "kind": "potential", "x": [0, 0, 3], "value": 0.3333333333333333, "tol": 0.01}
      ]})");
    m["sweep-exterior-point-to-ball"] = Json::parse(R"({
      "schema": 1, "name": "sweep-exterior-point-to-ball", "command": "sweep",
      "kernel": {"alpha": 2, "dim": 3},
      "region": {"shapes": [{"type": "ball", "center": [0, 0, 0], "radius": 1}], "nodes": 2000},
      "measure": {"points": [[2, 0, 0]], "weights": [1]},
      "seed": 1,
      "oracle": [{"name": "swept-mass", "kind": "swept-mass", "value": 0.5, "tol": 0.01}]})");
    m["ball-capacity"] = Json::parse(R"({
      "schema": 1, "name": "ball-capacity", "command": "equilibrium",
      "kernel": {"alpha": 2, "dim": 3},
      "region": {"shapes": [{"type": "ball", "center": [0, 0, 0], "radius": 1}], "nodes": 2000},
      "seed": 1,
      "oracle": [
        {"name": "capacity", "kind": "capacity", "value": 1.0, "tol": 0.01},
        {"name": "potential-r2", "kind": "potential", "x": [2, 0, 0], "value": 0.5, "tol": 0.01}
      ]})");
    m["green-half-sphere"] = Json::parse(R"({
      "schema": 1, "name": "green-half-sphere", "command": "green-equilibrium",
      "kernel": {"alpha": 2, "dim": 3},
      "domain": {"shapes": [{"type": "ball", "center": [0, 0, 0], "radius": 1}], "nodes": 2000},
      "targets": {"shapes": [{"type": "sphere", "center": [0, 0, 0], "radius": 0.5}], "nodes": 2000},
      "seed": 1,
      "oracle": [{"name": "capacity", "kind": "capacity", "value": 1.0}]})");
    m["mass-loss-compact"] = Json::parse(R"({
      "schema": 1, "name": "mass-loss-compact", "command": "mass-loss",
      "kernel": {"alpha": 2, "dim": 3},
      "region": {"shapes": [{"type": "ball", "center": [0, 0, 0], "radius": 1}], "nodes": 2000},
      "measure": {"points": [[2, 0, 0]], "weights": [1]},
      "seed": 1,
      "oracle": [
        {"name": "mass-out", "kind": "mass-out", "value": 0.5, "tol": 0.01},
        {"name": "strict-loss", "kind": "strict-loss", "value": true}
      ]})");
    m["mass-loss-exterior"] = Json::parse(R"({
      "schema": 1, "name": "mass-loss-exterior", "command": "mass-loss",
      "kernel": {"alpha": 2, "dim": 3},
      "region": {"shapes": [{"type": "ball-complement", "center": [0, 0, 0], "radius": 1}], "nodes": 2000},
      "measure": {"points": [[0, 0, 0]], "weights": [1]},
      "seed": 1,
      "oracle": [
        {"name": "mass-out", "kind": "mass-out", "value": 1.0, "tol": 0.01},
        {"name": "strict-loss", "kind": "strict-loss", "value": false}
      ]})");
    m["mass-loss-half-space"] = Json::parse(R"({
      "schema": 1, "name": "mass-loss-half-space", "command": "mass-loss",
      "kernel": {"alpha": 1.5, "dim": 3},
      "region": {"shapes": [{"type": "half-space", "normal": [0, 0, 1], "offset": 0}], "nodes": 2000},
      "measure": {"points": [[0, 0, 1]], "weights": [1]},
      "seed": 1,
      "oracle": [
        {"name": "mass-out", "kind": "mass-out", "value": 1.0, "tol": 0.01},
        {"name": "strict-loss", "kind": "strict-loss", "value": false}
      ]})");
    m["wiener-ball"] = Json::parse(R"({
      "schema": 1, "name": "wiener-ball", "command": "wiener",
      "kernel": {"alpha": 2, "dim": 3},
      "region": {"shapes": [{"type": "ball", "center": [0, 0, 0], "radius": 1}]},
      "point": [1, 0, 0], "q": 0.5, "k_max": 8,
      "oracle": [{"name": "classification", "kind": "classification", "value": "regular"}]})");
    m["kelvin-exactness"] = Json::parse(R"({
      "schema": 1, "name": "kelvin-exactness", "command": "kelvin-check",
      "kernel": {"alpha": 1.5, "dim": 3},
      "center": [0.25, -0.5, 1], "trials": 100, "seed": 1})");
    return m;
  }();
  return lib;
}

}  // namespace riesz::cli
