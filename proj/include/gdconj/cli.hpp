// Command-line front end. run() parses arguments, dispatches and writes to
// the given streams; tools/gdconj.cpp is a thin wrapper around it.
//
//   gdconj validate|eval|curve|classify|residual|trace --config FILE [flags]
//   gdconj region [flags]
//   gdconj example NAME SUBCOMMAND [flags]
#pragma once

#include "gdconj/config.hpp"
#include "gdconj/fixtures.hpp"
#include "gdconj/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gdconj::cli {

enum ExitCode : int { ok = 0, validation_failure = 1, config_error = 2, no_theorem = 3 };

struct Options {
  std::string command;
  std::string config_path;
  std::string fixture;
  std::optional<int> vertex;
  std::optional<std::string> x;
  std::optional<double> tol;
  std::optional<int> depth;
  std::optional<int> grid;
  std::string out;
  std::string format;
  bool timings = false;
};

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kDefaultCurveDepth = 12;
inline constexpr int kDefaultTraceDepth = 30;
inline constexpr int kDefaultResidualGrid = 101;
inline constexpr int kDefaultRegionDenominator = 50;

namespace detail {

// Thrown for flag values that are well-formed but out of range.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void flatten(const nlohmann::json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "." + std::to_string(k), out);
  } else {
    out << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

class Writer {
 public:
  Writer(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

inline void write_report(const nlohmann::json& j, const Options& o, std::ostream& out) {
  Writer w(o.out, out);
  if (o.format == "csv") {
    w.stream() << "key,value\n";
    flatten(j, "", w.stream());
  } else {
    w.stream() << j.dump(2) << '\n';
  }
}

inline int vertex_of(const Options& o, const ConfigParams& p) { return o.vertex.value_or(p.vertex.value_or(0)); }
inline double tol_of(const Options& o, const ConfigParams& p) { return o.tol.value_or(p.tol.value_or(kDefaultTol)); }

inline double x_of(const Options& o, const ConfigParams& p) {
  const std::string text = o.x ? *o.x : p.x.value_or("1/2");
  Rational q;
  try {
    q = parse_rational(text);
  } catch (const std::exception& e) {
    throw UsageError("bad --x value '" + text + "': " + e.what());
  }
  if (q < 0 || q > 1) throw UsageError("--x must lie in [0,1]");
  return to_double(q);
}

inline nlohmann::json metadata(const Options& o, const std::string& source) {
  nlohmann::json m;
  m["command"] = o.command;
  m["source"] = source;
  return m;
}

struct Context {
  SystemPair pair;
  ConfigParams params;
  std::string source;
};

inline int run_validate(const Config& cfg, const Options& o, std::ostream& out, const std::string& source) {
  const CompatibilityReport f = validate_compatibility(cfg.f);
  const CompatibilityReport g = validate_compatibility(cfg.g);
  nlohmann::json j;
  j["f"] = to_json(f);
  j["g"] = to_json(g);
  j["ok"] = f.ok && g.ok;
  j["metadata"] = metadata(o, source);
  write_report(j, o, out);
  return f.ok && g.ok ? ok : validation_failure;
}

inline int run_pair_command(const Context& ctx, Options o, std::ostream& out, std::ostream& err) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const SystemPair& pair = ctx.pair;
  const ConfigParams& p = ctx.params;
  nlohmann::json j;
  j["metadata"] = metadata(o, ctx.source);
  auto finish = [&]() {
    if (o.timings) {
      j["metadata"]["timings_ms"] =
          std::chrono::duration<double, std::milli>(clock::now() - start).count();
    }
    write_report(j, o, out);
  };

  if (o.command == "validate") {
    j["f"] = to_json(pair.f().status());
    j["g"] = to_json(pair.g().status());
    j["ok"] = true;
    finish();
    return ok;
  }
  if (o.command == "eval") {
    const int v = vertex_of(o, p);
    const double x = x_of(o, p);
    const double tol = tol_of(o, p);
    check_vertex(v);
    SolveOptions opts;
    if (o.depth) opts.max_depth = *o.depth;
    const PhiValue phi = solve_phi(pair, v, x, tol, opts);
    if (phi.depth_cap_reached) err << "warning: depth cap reached before the requested tolerance\n";
    j["phi"] = to_json(phi);
    j["metadata"]["vertex"] = v;
    j["metadata"]["x"] = x;
    j["metadata"]["tol"] = tol;
    j["metadata"]["max_depth"] = opts.max_depth;
    finish();
    return ok;
  }
  if (o.command == "curve") {
    const int v = vertex_of(o, p);
    const int depth = o.depth.value_or(p.depth.value_or(kDefaultCurveDepth));
    check_vertex(v);
    const CurveSample s = sample_curve(pair, v, depth);
    Writer w(o.out, out);
    if (o.format == "json") {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& [x, y] : s.points) pts.push_back({x, y});
      w.stream() << nlohmann::json{{"vertex", v}, {"depth", depth}, {"points", pts}}.dump() << '\n';
    } else {
      emit_curve_csv(s, w.stream());
    }
    return ok;
  }
  if (o.command == "classify") {
    const auto c = classify_pair(pair);
    if (!c) {
      err << "no theorem applies: the source system is not dyadic and the pair is not affine\n";
      j["theorem"] = nullptr;
      j["verdict"] = nullptr;
      finish();
      return no_theorem;
    }
    j["theorem"] = to_string(c->theorem);
    j["verdict"] = to_json(c->verdict);
    finish();
    return ok;
  }
  if (o.command == "residual") {
    const double tol = o.tol.value_or(p.tol.value_or(1e-8));
    const int grid = o.grid.value_or(p.grid.value_or(kDefaultResidualGrid));
    if (grid < 2) throw UsageError("--grid must be at least 2");
    const ResidualResult r = residual_max(pair, static_cast<std::size_t>(grid), tol);
    j["residual"] = r.max_residual;
    j["capped_evaluations"] = r.capped_evaluations;
    j["metadata"]["tol"] = tol;
    j["metadata"]["grid"] = grid;
    finish();
    return ok;
  }
  if (o.command == "trace") {
    const int v = vertex_of(o, p);
    const double x = x_of(o, p);
    const int depth = o.depth.value_or(p.depth.value_or(kDefaultTraceDepth));
    check_vertex(v);
    const RatioTrace t = ratio_trace(pair, v, x, depth);
    Writer w(o.out, out);
    if (o.format == "json") {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : t.rows) {
        nlohmann::json row{{"depth", r.depth}, {"digit", r.digit}, {"f_len", r.f_len},
                           {"g_len", r.g_len}, {"ratio", r.ratio}};
        row["rs_ratio"] = r.rs_ratio ? nlohmann::json(*r.rs_ratio) : nlohmann::json(nullptr);
        row["t_n"] = r.t_n ? nlohmann::json(*r.t_n) : nlohmann::json(nullptr);
        rows.push_back(row);
      }
      w.stream() << nlohmann::json{{"vertex", v}, {"x", x}, {"rows", rows}}.dump(2) << '\n';
    } else {
      emit_trace_csv(t, w.stream());
    }
    return ok;
  }
  throw UsageError("command '" + o.command + "' does not take a system pair");
}

// Region lattice: c00, c11 in [-1, 2] with step 1/grid.
inline int run_region(const Options& o, std::ostream& out) {
  const int den = o.grid.value_or(kDefaultRegionDenominator);
  if (den < 1) throw UsageError("--grid must be positive");
  Writer w(o.out, out);
  if (o.format == "json") {
    nlohmann::json cells = nlohmann::json::array();
    const Rational step = make_rational(1, den);
    for (Rational c00 = -1; c00 <= 2; c00 += step) {
      for (Rational c11 = -1; c11 <= 2; c11 += step) {
        const RegionReport r = admissible_region(c00, c11);
        cells.push_back({{"c00", to_string(c00)}, {"c11", to_string(c11)}, {"admissible", r.ok},
                         {"violated", r.violated}});
      }
    }
    w.stream() << cells.dump() << '\n';
  } else {
    emit_region_csv(-1, 2, den, w.stream());
  }
  return ok;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-directed conjugate equations on [0,1]", "gdconj"};
  app.require_subcommand(1);
  Options o;

  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--vertex", o.vertex, "vertex 0 or 1")->check(CLI::Range(0, 1));
    sub->add_option("--x", o.x, "point in [0,1], rational or decimal");
    sub->add_option("--tol", o.tol, "enclosure width")->check(CLI::PositiveNumber);
    sub->add_option("--depth", o.depth, "depth");
    sub->add_option("--grid", o.grid, "grid size (region: lattice denominator)");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--timings", o.timings, "include wall-clock timings in reports");
  };

  const std::vector<std::string> pair_commands{"validate", "eval", "curve", "classify", "residual", "trace"};
  const std::map<std::string, std::string> about{
      {"validate", "check both systems for compatibility"},
      {"eval", "enclose phi_i(x)"},
      {"curve", "sample phi_i at the depth-n partition points"},
      {"classify", "decide Identity, Smooth or Singular"},
      {"residual", "max functional-equation residual on a grid"},
      {"trace", "interval-ratio trace along the itinerary of x"},
  };
  for (const auto& name : pair_commands) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", o.config_path, "system pair config file")->required();
    add_flags(sub);
  }
  add_flags(app.add_subcommand("region", "admissible region of the smooth family"));
  CLI::App* example = app.add_subcommand("example", "run a command on a built-in fixture");
  std::string sub_name;
  example->add_option("name", o.fixture, "fixture")->required()->check(CLI::IsMember(fixtures::names()));
  example->add_option("command", sub_name, "sub-command")->required()->check(CLI::IsMember(pair_commands));
  add_flags(example);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
  for (const auto* sub : app.get_subcommands()) o.command = sub->get_name();
  if (o.command == "example") o.command = sub_name;
  if (o.format.empty()) {
    o.format = (o.command == "curve" || o.command == "trace" || o.command == "region") ? "csv" : "json";
  }

  try {
    if (o.command == "region") return detail::run_region(o, out);
    if (!o.fixture.empty()) {
      detail::Context ctx{*fixtures::by_name(o.fixture), {}, o.fixture};
      return detail::run_pair_command(ctx, o, out, err);
    }
    const Config cfg = load_config(o.config_path);
    if (o.command == "validate") return detail::run_validate(cfg, o, out, o.config_path);
    detail::Context ctx{cfg.pair(), cfg.params, o.config_path};
    return detail::run_pair_command(ctx, o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const ValidationError& e) {
    err << "validation failure: " << e.what() << '\n';
    return validation_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace gdconj::cli
