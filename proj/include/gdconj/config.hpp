// Text configuration for a system pair:
//
//   [f.0.0]              one section per map, f.i.j or g.i.j
//   kind = affine        affine | lf | expr
//   slope = 1/2          affine: slope, intercept
//   intercept = 0        lf: a, b, c, d      expr: formula, optional lip
//
//   [params]             optional command defaults
//   tol = 1e-10
//
// Numbers are rational strings ("-1/2", "0.25"). '#' and ';' start comments.
#pragma once

#include "gdconj/systems.hpp"

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gdconj {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The config parsed but a system fails the compatibility chain.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigParams {
  std::optional<double> tol;
  std::optional<int> depth;
  std::optional<int> grid;
  std::optional<int> vertex;
  std::optional<std::string> x;
};

struct Config {
  std::string label;
  MapGrid f, g;
  ConfigParams params;

  SystemPair pair() const {
    System fs(f, label.empty() ? "f" : label + ".f");
    System gs(g, label.empty() ? "g" : label + ".g");
    for (const auto* s : {&fs, &gs}) {
      if (!s->valid()) {
        std::string msg = "system " + std::string(s == &fs ? "f" : "g") + " is not compatible:";
        for (const auto& v : s->status().violations) msg += " " + v + ";";
        throw ValidationError(msg);
      }
    }
    return SystemPair(std::move(fs), std::move(gs));
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

using Section = std::map<std::string, std::string>;

inline Rational config_rational(const Section& sec, const std::string& name, const std::string& key) {
  auto it = sec.find(key);
  if (it == sec.end()) throw ConfigError("[" + name + "]: missing key '" + key + "'");
  try {
    return parse_rational(it->second);
  } catch (const std::exception& e) {
    throw ConfigError("[" + name + "]: bad number for '" + key + "': " + e.what());
  }
}

inline void allow_keys(const Section& sec, const std::string& name, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : sec) {
    bool known = false;
    for (const char* a : keys) known = known || k == a;
    if (!known) throw ConfigError("[" + name + "]: unknown key '" + k + "'");
  }
}

inline Map config_map(const Section& sec, const std::string& name) {
  auto kind = sec.find("kind");
  if (kind == sec.end()) throw ConfigError("[" + name + "]: missing key 'kind'");
  try {
    if (kind->second == "affine") {
      allow_keys(sec, name, {"kind", "slope", "intercept"});
      return Map::affine(config_rational(sec, name, "slope"), config_rational(sec, name, "intercept"));
    }
    if (kind->second == "lf") {
      allow_keys(sec, name, {"kind", "a", "b", "c", "d"});
      return Map::lf({config_rational(sec, name, "a"), config_rational(sec, name, "b"),
                      config_rational(sec, name, "c"), config_rational(sec, name, "d")});
    }
    if (kind->second == "expr") {
      allow_keys(sec, name, {"kind", "formula", "lip"});
      auto formula = sec.find("formula");
      if (formula == sec.end()) throw ConfigError("[" + name + "]: missing key 'formula'");
      std::optional<Rational> lip;
      if (sec.count("lip")) lip = config_rational(sec, name, "lip");
      return Map::expr(formula->second, lip);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("[" + name + "]: " + e.what());
  }
  throw ConfigError("[" + name + "]: unknown kind '" + kind->second + "'");
}

template <class T>
T config_number(const Section& sec, const std::string& key) {
  const std::string& text = sec.at(key);
  try {
    std::size_t used = 0;
    T v;
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(text, &used);
    } else {
      v = static_cast<T>(std::stoi(text, &used));
    }
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("[params]: bad value for '" + key + "': " + text);
  }
}

}  // namespace detail

inline Config parse_config(std::string_view text) {
  std::map<std::string, detail::Section> sections;
  std::string current;  // "" = top level
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    const std::string body = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      current = detail::trim(std::string_view(body).substr(1, body.size() - 2));
      if (sections.count(current)) throw ConfigError("duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    auto& sec = sections[current];
    if (sec.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    sec[key] = value;
  }

  Config cfg;
  std::array<std::array<bool, 2>, 2> seen_f{}, seen_g{};
  for (const auto& [name, sec] : sections) {
    if (name.empty()) {
      detail::allow_keys(sec, "top level", {"label"});
      if (sec.count("label")) cfg.label = sec.at("label");
      continue;
    }
    if (name == "params") {
      detail::allow_keys(sec, name, {"tol", "depth", "grid", "vertex", "x"});
      if (sec.count("tol")) cfg.params.tol = detail::config_number<double>(sec, "tol");
      if (sec.count("depth")) cfg.params.depth = detail::config_number<int>(sec, "depth");
      if (sec.count("grid")) cfg.params.grid = detail::config_number<int>(sec, "grid");
      if (sec.count("vertex")) cfg.params.vertex = detail::config_number<int>(sec, "vertex");
      if (sec.count("x")) cfg.params.x = sec.at("x");
      continue;
    }
    const bool ok_shape = name.size() == 5 && (name[0] == 'f' || name[0] == 'g') && name[1] == '.' &&
                          (name[2] == '0' || name[2] == '1') && name[3] == '.' && (name[4] == '0' || name[4] == '1');
    if (!ok_shape) throw ConfigError("unknown section [" + name + "]");
    const int i = name[2] - '0', j = name[4] - '0';
    auto& grid = name[0] == 'f' ? cfg.f : cfg.g;
    auto& seen = name[0] == 'f' ? seen_f : seen_g;
    grid[i][j] = detail::config_map(sec, name);
    seen[i][j] = true;
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const std::string idx = std::to_string(i) + "." + std::to_string(j);
      if (!seen_f[i][j]) throw ConfigError("missing section [f." + idx + "]");
      if (!seen_g[i][j]) throw ConfigError("missing section [g." + idx + "]");
    }
  }
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

inline std::string map_config_text(const Map& m) {
  if (const auto* a = std::get_if<AffineMap>(&m.variant())) {
    return "kind = affine\nslope = " + to_string(a->slope()) + "\nintercept = " + to_string(a->intercept()) + "\n";
  }
  if (const auto* l = std::get_if<LFMap>(&m.variant())) {
    const Matrix2& A = l->matrix();
    return "kind = lf\na = " + to_string(A.a) + "\nb = " + to_string(A.b) + "\nc = " + to_string(A.c) +
           "\nd = " + to_string(A.d) + "\n";
  }
  const auto& e = std::get<ExprMap>(m.variant());
  std::string s = "kind = expr\nformula = " + e.source() + "\n";
  if (e.declared_lip()) s += "lip = " + to_string(*e.declared_lip()) + "\n";
  return s;
}

/// Inverse of parse_config for the map sections.
inline std::string to_config_text(const SystemPair& pair, const std::string& label = {}) {
  std::string out;
  if (!label.empty()) out += "label = " + label + "\n";
  for (const char side : {'f', 'g'}) {
    const System& s = side == 'f' ? pair.f() : pair.g();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        out += "\n[" + std::string(1, side) + "." + std::to_string(i) + "." + std::to_string(j) + "]\n";
        out += map_config_text(s.map(i, j));
      }
    }
  }
  return out;
}

}  // namespace gdconj
