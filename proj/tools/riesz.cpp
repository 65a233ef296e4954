// riesz: scenario runner and refinement driver.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/io.hpp"
#include "riesz/scenario.hpp"

namespace fs = std::filesystem;
using riesz::io::Json;

namespace {

struct Common {
  std::string file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out;
};

riesz::cli::Scenario load(const Common& c) {
  Json doc;
  fs::path base;
  std::string stem;
  const std::string prefix = "builtin:";
  if (c.file.rfind(prefix, 0) == 0) {
    const std::string name = c.file.substr(prefix.size());
    const auto& lib = riesz::cli::builtin_scenarios();
    const auto it = lib.find(name);
    if (it == lib.end()) throw riesz::SchemaError("no built-in scenario named \"" + name + "\"");
    doc = it->second;
    stem = name;
  } else {
    doc = riesz::io::read_json_file(c.file);
    base = fs::path(c.file).parent_path();
    stem = fs::path(c.file).stem().string();
  }
  riesz::cli::Scenario sc = riesz::cli::parse_scenario(doc, base);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw riesz::SchemaError("--tol-override: expected key=value, got \"" + kv + "\"");
    const std::string key = kv.substr(0, eq);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw riesz::SchemaError("--tol-override: value for \"" + key + "\" is not a number");
    }
    sc.tol.set(key, v);
  }
  if (c.seed) sc.seed = *c.seed;
  if (!c.out.empty()) sc.output = c.out;
  else if (sc.output.empty()) sc.output = sc.name.empty() ? stem : sc.name;
  return sc;
}

void report_failures(const riesz::cli::Outcome& o) {
  std::ostringstream failed;
  for (const auto& c : o.checks) {
    if (c.passed) continue;
    if (failed.tellp() > 0) failed << ", ";
    failed << c.name;
  }
  std::cerr << "property check failed: " << failed.str() << '\n';
}

void write_outputs(const std::string& prefix, const riesz::cli::Outcome& o) {
  riesz::io::write_atomically(prefix + ".result.json", o.result.dump(2) + "\n");
  riesz::io::write_atomically(prefix + ".table.csv", o.table.str());
}

int run(const Common& c) {
  const riesz::cli::Scenario sc = load(c);
  const riesz::cli::Outcome o = riesz::cli::execute(sc);
  write_outputs(sc.output, o);
  std::cout << sc.output << ".result.json: " << o.checks.size() << " checks, " << (o.passed ? "all passed" : "failures")
            << '\n';
  if (!o.passed) {
    report_failures(o);
    return 2;
  }
  return 0;
}

int refine(const Common& c, const std::vector<long long>& ns) {
  if (ns.empty()) throw CLI::ValidationError("--n", "needs at least one node budget");
  for (long long n : ns) {
    if (n < 1) throw CLI::ValidationError("--n", "node budgets must be positive");
  }
  const riesz::cli::Scenario sc = load(c);
  riesz::io::CsvTable table({"n", "nodes", "max_rel_error", "mean_rel_error", "worst_check"});
  std::optional<riesz::cli::Outcome> last;
  bool passed = true;
  for (long long n : ns) {
    riesz::cli::Outcome o = riesz::cli::execute(riesz::cli::with_node_budget(sc, static_cast<Eigen::Index>(n)));
    table.add({std::to_string(n), std::to_string(o.node_count), riesz::io::format_double(o.max_oracle_error),
               riesz::io::format_double(o.mean_oracle_error), o.worst_oracle});
    if (!o.passed) {
      std::cerr << "N=" << n << ": ";
      report_failures(o);
    }
    passed = passed && o.passed;
    last = std::move(o);
  }
  write_outputs(sc.output, *last);
  riesz::io::write_atomically(sc.output + ".refine.csv", table.str());
  std::cout << table.str();
  return passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riesz potential theory: balayage, equilibrium measures, Green kernels, thinness"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", common.file, "scenario JSON file, or builtin:NAME")->required();
    sub->add_option("--tol-override", common.overrides, "override a tolerance, key=value (repeatable)");
    sub->add_option("--seed", common.seed, "random seed (u64)");
    sub->add_option("--out", common.out, "output path prefix");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario");
  add_common(run_cmd);
  CLI::App* refine_cmd = app.add_subcommand("refine", "rerun a scenario across node budgets");
  add_common(refine_cmd);
  std::vector<long long> ns;
  refine_cmd->add_option("--n", ns, "comma-separated node budgets")->delimiter(',')->required();
  CLI::App* list_cmd = app.add_subcommand("list", "list built-in scenarios");
  std::string show_name;
  CLI::App* show_cmd = app.add_subcommand("show", "print a built-in scenario");
  show_cmd->add_option("name", show_name, "built-in scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run_cmd) return run(common);
    if (*refine_cmd) return refine(common, ns);
    if (*list_cmd) {
      for (const auto& [name, doc] : riesz::cli::builtin_scenarios()) {
        std::cout << name << "  (" << doc["command"].get<std::string>() << ")\n";
      }
      return 0;
    }
    const auto& lib = riesz::cli::builtin_scenarios();
    const auto it = lib.find(show_name);
    if (it == lib.end()) {
      std::cerr << "error: no built-in scenario named \"" << show_name << "\"\n";
      return 1;
    }
    std::cout << it->second.dump(2) << '\n';
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const riesz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
