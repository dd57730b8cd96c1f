// Evaluation of the solution pair (phi_0, phi_1) by nested intervals:
// descend the f-itinerary of x and track the g-interval with the same digits.
#pragma once

#include "gdconj/systems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gdconj {

enum class TieBreak { left, right };

struct SolveOptions {
  int max_depth = 64;
  TieBreak tie_break = TieBreak::left;
  /// Return the exact g-endpoint when x is an f-interval endpoint.
  bool snap_endpoints = true;
};

struct PhiValue {
  Enclosure enclosure;
  int depth_used = 0;
  Itinerary itinerary;
  bool depth_cap_reached = false;

  double estimate() const { return enclosure.midpoint(); }
};

/// Encloses phi_i(x) in an interval of width <= tol. If max_depth is reached
/// first, the best enclosure is returned with depth_cap_reached set.
inline PhiValue solve_phi(const SystemPair& pair, int i, double x, double tol, const SolveOptions& opts = {}) {
  check_vertex(i);
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("solve_phi: x outside [0,1]");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_phi: tolerance must be positive");
  PhiValue out;
  out.itinerary.start = i;
  if (pair.identical()) {
    // I^g = I^f for every itinerary, so the intersection is {x}
    out.enclosure = {x, x};
    return out;
  }
  if (opts.snap_endpoints && (x == 0.0 || x == 1.0)) {
    out.enclosure = {x, x};
    return out;
  }
  IntervalTracker f(pair.f(), i, false);
  IntervalTracker g(pair.g(), i, false);
  while (g.length() > tol && f.depth() < opts.max_depth) {
    // At an endpoint of the current interval every later digit is the same,
    // so the g-intersection is the matching endpoint of the g-interval.
    if (f.depth() > 0 && (x == f.lo() || x == f.hi())) {
      const double y = x == f.lo() ? g.lo() : g.hi();
      out.enclosure = {y, y};
      out.depth_used = f.depth() + 1;
      out.itinerary.digits = f.digits();
      out.itinerary.digits.push_back(x == f.lo() ? 0 : 1);
      return out;
    }
    const int cmp = f.compare_to_split(x);
    if (cmp == 0 && opts.snap_endpoints) {
      const double y = g.split();
      out.enclosure = {y, y};
      out.depth_used = f.depth() + 1;
      out.itinerary.digits = f.digits();
      out.itinerary.digits.push_back(opts.tie_break == TieBreak::left ? 0 : 1);
      return out;
    }
    int digit = cmp < 0 ? 0 : 1;
    if (cmp == 0) digit = opts.tie_break == TieBreak::left ? 0 : 1;
    f.push(digit);
    g.push(digit);
  }
  out.enclosure = {g.lo(), g.hi()};
  out.depth_used = f.depth();
  out.itinerary.digits = f.digits();
  out.depth_cap_reached = g.length() > tol;
  return out;
}

struct CurveSample {
  int vertex = 0;
  std::vector<std::pair<double, double>> points;
};

inline constexpr int kMaxCurveDepth = 20;

/// All 2^n + 1 endpoints of depth-n f-intervals at vertex i with the values
/// of phi_i there (the matching g-interval endpoints), sorted by x.
inline CurveSample sample_curve(const SystemPair& pair, int i, int depth) {
  check_vertex(i);
  if (depth < 0 || depth > kMaxCurveDepth) {
    throw std::invalid_argument("curve depth must be in [0, " + std::to_string(kMaxCurveDepth) + "]");
  }
  const auto xs = breakpoints(pair.f(), depth);
  const auto ys = pair.identical() ? xs : breakpoints(pair.g(), depth);
  CurveSample c;
  c.vertex = i;
  c.points.reserve(xs[i].size());
  for (std::size_t k = 0; k < xs[i].size(); ++k) c.points.emplace_back(xs[i][k], ys[i][k]);
  return c;
}

struct ResidualResult {
  double max_residual = 0;
  std::size_t capped_evaluations = 0;  // solves that hit the depth cap
};

/// max over a uniform m-point grid and all (i,j) of
/// |g_{i,j}(phi_j(x)) - phi_i(f_{i,j}(x))|, using enclosure midpoints.
inline ResidualResult residual_max(const SystemPair& pair, std::size_t grid_size, double tol,
                                   const SolveOptions& opts = {}) {
  if (grid_size < 2) throw std::invalid_argument("residual grid needs at least 2 points");
  ResidualResult r;
  auto phi = [&](int v, double x) {
    const PhiValue p = solve_phi(pair, v, x, tol, opts);
    if (p.depth_cap_reached) ++r.capped_evaluations;
    return p.estimate();
  };
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const std::array<double, 2> at_x{phi(0, x), phi(1, x)};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double lhs = pair.g().map(i, j).apply(at_x[j]);
        const double rhs = phi(i, pair.f().map(i, j).apply(x));
        r.max_residual = std::max(r.max_residual, std::abs(lhs - rhs));
      }
    }
  }
  return r;
}

namespace detail {

inline double point_segment_distance(double px, double py, const std::pair<double, double>& a,
                                     const std::pair<double, double>& b) {
  const double dx = b.first - a.first, dy = b.second - a.second;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - a.first) * dx + (py - a.second) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (a.first + t * dx), py - (a.second + t * dy));
}

// Euclidean distance from (px,py) to the polyline through points (x sorted).
// Segments whose x-range is farther than the current best are skipped.
inline double polyline_distance(const std::vector<std::pair<double, double>>& pts, double px, double py) {
  const std::size_t segs = pts.size() - 1;
  auto it = std::upper_bound(pts.begin(), pts.end(), px,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  std::size_t k = it == pts.begin() ? 0 : static_cast<std::size_t>(it - pts.begin()) - 1;
  k = std::min(k, segs - 1);
  double best = point_segment_distance(px, py, pts[k], pts[k + 1]);
  for (std::size_t j = k; j-- > 0;) {
    if (px - pts[j + 1].first > best) break;
    best = std::min(best, point_segment_distance(px, py, pts[j], pts[j + 1]));
  }
  for (std::size_t j = k + 1; j < segs; ++j) {
    if (pts[j].first - px > best) break;
    best = std::min(best, point_segment_distance(px, py, pts[j], pts[j + 1]));
  }
  return best;
}

}  // namespace detail

struct GraphOperatorDiscrepancy {
  std::array<double, 2> per_vertex{0, 0};
  double max() const { return std::max(per_vertex[0], per_vertex[1]); }
};

inline constexpr int kMaxGraphCheckDepth = 16;

/// Applies Phi_{i,j}(x,y) = (f_{i,j}(x), g_{i,j}(y)) to the sampled graphs
/// K_0, K_1 and measures, per target vertex i, the largest distance from
/// Phi_{i,0}(K_0) u Phi_{i,1}(K_1) to the piecewise-linear sampled K_i.
inline GraphOperatorDiscrepancy graph_operator_check(const SystemPair& pair, int depth) {
  if (depth < 1 || depth > kMaxGraphCheckDepth) {
    throw std::invalid_argument("graph check depth must be in [1, " + std::to_string(kMaxGraphCheckDepth) + "]");
  }
  const std::array<CurveSample, 2> K{sample_curve(pair, 0, depth), sample_curve(pair, 1, depth)};
  GraphOperatorDiscrepancy out;
  for (int i = 0; i < 2; ++i) {
    double worst = 0;
    for (int j = 0; j < 2; ++j) {
      const Map& f = pair.f().map(i, j);
      const Map& g = pair.g().map(i, j);
      for (const auto& [x, y] : K[j].points) {
        worst = std::max(worst, detail::polyline_distance(K[i].points, f.apply(x), g.apply(y)));
      }
    }
    out.per_vertex[i] = worst;
  }
  return out;
}

}  // namespace gdconj
