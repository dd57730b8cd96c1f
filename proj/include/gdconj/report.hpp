// CSV and JSON serialisation of solver, classifier and diagnostic results.
#pragma once

#include "gdconj/classify.hpp"
#include "gdconj/diagnostics.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gdconj {

/// 17 significant digits: round-trips exactly and is byte-stable.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void emit_curve_csv(const CurveSample& sample, std::ostream& out) {
  out << "x,phi\n";
  for (const auto& [x, y] : sample.points) out << format_real(x) << ',' << format_real(y) << '\n';
}

inline void emit_curve_csv(const CurveSample& sample, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_curve_csv(sample, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline void emit_trace_csv(const RatioTrace& trace, std::ostream& out) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  out << "depth,digit,f_len,g_len,ratio,rs_ratio,t_n\n";
  for (const auto& r : trace.rows) {
    out << r.depth << ',' << r.digit << ',' << format_real(r.f_len) << ',' << format_real(r.g_len) << ','
        << format_real(r.ratio) << ',' << opt(r.rs_ratio) << ',' << opt(r.t_n) << '\n';
  }
}

/// Admissibility of the smooth family on the lattice lo + k/denominator.
inline void emit_region_csv(const Rational& lo, const Rational& hi, long long denominator, std::ostream& out) {
  if (denominator <= 0) throw std::invalid_argument("region lattice denominator must be positive");
  if (hi < lo) throw std::invalid_argument("region bounds are reversed");
  const Rational step = make_rational(1, denominator);
  out << "c00,c11,admissible,violated\n";
  for (Rational c00 = lo; c00 <= hi; c00 += step) {
    for (Rational c11 = lo; c11 <= hi; c11 += step) {
      const RegionReport r = admissible_region(c00, c11);
      std::string violated;
      for (int k : r.violated) violated += (violated.empty() ? "" : " ") + std::to_string(k);
      out << to_string(c00) << ',' << to_string(c11) << ',' << (r.ok ? 1 : 0) << ',' << violated << '\n';
    }
  }
}

inline nlohmann::json to_json(const Matrix2& m) {
  return {{"a", to_string(m.a)}, {"b", to_string(m.b)}, {"c", to_string(m.c)}, {"d", to_string(m.d)},
          {"formula", formula(m)}};
}

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["kind"] = to_string(v.kind);
  j["evidence"] = v.evidence;
  nlohmann::json facts = nlohmann::json::object();
  for (const auto& [k, val] : v.facts) facts[k] = val;
  j["facts"] = facts;
  if (v.closed_forms) {
    j["closed_forms"] = {{"phi_0", to_json((*v.closed_forms)[0])}, {"phi_1", to_json((*v.closed_forms)[1])}};
  }
  return j;
}

inline nlohmann::json to_json(const CompatibilityReport& r) {
  return {{"ok", r.ok}, {"violations", r.violations}};
}

inline nlohmann::json to_json(const PhiValue& p) {
  return {{"lo", p.enclosure.lo},
          {"hi", p.enclosure.hi},
          {"estimate", p.estimate()},
          {"width", p.enclosure.width()},
          {"depth_used", p.depth_used},
          {"depth_cap_reached", p.depth_cap_reached},
          {"itinerary", p.itinerary.digits}};
}

}  // namespace gdconj
