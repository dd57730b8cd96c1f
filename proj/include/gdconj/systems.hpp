// Compatible systems {h_{i,j}} indexed by the two-vertex complete digraph,
// their nested interval coding, itineraries and interval-size diagnostics.
#pragma once

#include "gdconj/maps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gdconj {

using MapGrid = std::array<std::array<Map, 2>, 2>;
using MatrixGrid = std::array<std::array<Matrix2, 2>, 2>;

inline void check_vertex(int v) {
  if (v != 0 && v != 1) throw std::invalid_argument("vertex must be 0 or 1, got " + std::to_string(v));
}

struct Itinerary {
  int start = 0;
  std::vector<int> digits;

  friend bool operator==(const Itinerary&, const Itinerary&) = default;
};

/// Closed interval [lo, hi] inside [0,1].
struct Enclosure {
  double lo = 0;
  double hi = 1;

  double width() const { return hi - lo; }
  double midpoint() const { return lo + 0.5 * (hi - lo); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Enclosure& e) const { return lo <= e.lo && e.hi <= hi; }
};

struct CompatibilityReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Tolerance for compatibility identities that cannot be checked exactly.
inline constexpr double kCompatibilityTolerance = 1e-12;

namespace detail {

struct MapValue {
  std::optional<Rational> exact;
  double approx = 0;
};

inline MapValue value_at(const Map& m, int point) {
  MapValue v;
  v.exact = m.apply_exact(Rational(point));
  v.approx = v.exact ? to_double(*v.exact) : m.apply(point);
  return v;
}

inline bool equal_values(const MapValue& l, const MapValue& r) {
  if (l.exact && r.exact) return *l.exact == *r.exact;
  return std::abs(l.approx - r.approx) <= kCompatibilityTolerance;
}

inline bool strictly_increasing_on_grid(const Map& m, std::size_t n = kExprValidationGrid) {
  double prev = m.apply(0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double y = m.apply(static_cast<double>(k) / static_cast<double>(n - 1));
    if (!(y > prev)) return false;
    prev = y;
  }
  return true;
}

}  // namespace detail

/// Checks 0 = h_{i,0}(0) < h_{i,0}(1) = h_{i,1}(0) < h_{i,1}(1) = 1 for both
/// rows, exactly when the values are rational, and strict monotonicity of each
/// map on a uniform grid.
inline CompatibilityReport validate_compatibility(const MapGrid& h) {
  CompatibilityReport r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.violations.push_back(std::move(msg));
  };
  for (int i = 0; i < 2; ++i) {
    const std::string row = "row " + std::to_string(i) + ": ";
    const auto left0 = detail::value_at(h[i][0], 0);
    const auto left1 = detail::value_at(h[i][0], 1);
    const auto right0 = detail::value_at(h[i][1], 0);
    const auto right1 = detail::value_at(h[i][1], 1);
    const detail::MapValue zero{Rational(0), 0.0}, one{Rational(1), 1.0};
    if (!detail::equal_values(left0, zero)) fail(row + "h_{i,0}(0) != 0");
    if (!detail::equal_values(left1, right0)) fail(row + "h_{i,0}(1) != h_{i,1}(0)");
    if (!detail::equal_values(right1, one)) fail(row + "h_{i,1}(1) != 1");
    const bool interior = left1.exact ? (*left1.exact > 0 && *left1.exact < 1)
                                      : (left1.approx > 0 && left1.approx < 1);
    if (!interior) fail(row + "h_{i,0}(1) not strictly inside (0,1)");
    for (int j = 0; j < 2; ++j) {
      if (!detail::strictly_increasing_on_grid(h[i][j])) {
        fail("map [" + std::to_string(i) + "][" + std::to_string(j) + "] is not strictly increasing");
      }
    }
  }
  return r;
}

class System {
 public:
  System() : System(default_maps(), "dyadic") {}
  explicit System(MapGrid maps, std::string label = {})
      : maps_(std::move(maps)), label_(std::move(label)), status_(validate_compatibility(maps_)) {
    exact_ = true;
    for (const auto& row : maps_)
      for (const auto& m : row) exact_ = exact_ && m.exact();
  }

  const Map& map(int i, int j) const { return maps_[i][j]; }
  const MapGrid& maps() const { return maps_; }
  const std::string& label() const { return label_; }
  const CompatibilityReport& status() const { return status_; }
  bool valid() const { return status_.ok; }
  /// Every map is affine or linear fractional.
  bool exact() const { return exact_; }

  std::optional<MatrixGrid> matrices() const {
    if (!exact_) return std::nullopt;
    MatrixGrid out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out[i][j] = *maps_[i][j].as_matrix();
    return out;
  }

  void require_valid() const {
    if (valid()) return;
    std::string msg = "system '" + label_ + "' is not compatible:";
    for (const auto& v : status_.violations) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }

 private:
  static MapGrid default_maps() {
    const Map left = Map::affine(make_rational(1, 2), 0);
    const Map right = Map::affine(make_rational(1, 2), make_rational(1, 2));
    return {{{left, right}, {left, right}}};
  }

  MapGrid maps_;
  std::string label_;
  CompatibilityReport status_;
  bool exact_ = true;
};

/// f_{i,0}(x) = x/2 and f_{i,1}(x) = (x+1)/2 for both rows.
inline System dyadic_system() { return System(); }

inline bool same_system(const System& l, const System& r) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!same_map(l.map(i, j), r.map(i, j))) return false;
  return true;
}

inline bool is_dyadic(const System& s) { return same_system(s, dyadic_system()); }

/// Source system f and target system g of one conjugate equation
/// g_{i,j} o phi_j = phi_i o f_{i,j}.
class SystemPair {
 public:
  SystemPair(System f, System g) : f_(std::move(f)), g_(std::move(g)) {
    f_.require_valid();
    g_.require_valid();
    identical_ = same_system(f_, g_);
  }

  const System& f() const { return f_; }
  const System& g() const { return g_; }
  /// f and g define the same maps, so both solutions are the identity.
  bool identical() const { return identical_; }

 private:
  System f_, g_;
  bool identical_ = false;
};

namespace detail {

inline void check_itinerary(const Itinerary& it) {
  check_vertex(it.start);
  if (it.digits.empty()) throw std::invalid_argument("itinerary has no digits");
  for (int d : it.digits) {
    if (d != 0 && d != 1) throw std::invalid_argument("itinerary digit must be 0 or 1");
  }
}

}  // namespace detail

/// Follows I_start(i_1, ..., i_n) as digits are appended. Each step splits the
/// current interval at H(h_{v,0}(1)), H being the composite so far and v the
/// last vertex; children inherit the parent's endpoint values, which keeps
/// the intervals nested in floating point too.
///
/// In exact mode (affine and linear fractional systems) the composite is kept
/// as a rational matrix product and all endpoints are exact.
class IntervalTracker {
 public:
  IntervalTracker(const System& s, int start, bool exact)
      : system_(&s), vertex_(start), exact_(exact && s.exact()) {
    check_vertex(start);
    if (exact_) {
      lo_q_ = 0;
      hi_q_ = 1;
    }
  }

  int vertex() const { return vertex_; }
  int depth() const { return static_cast<int>(digits_.size()); }
  bool exact() const { return exact_; }
  const std::vector<int>& digits() const { return digits_; }

  double lo() const { return exact_ ? to_double(lo_q_) : lo_; }
  double hi() const { return exact_ ? to_double(hi_q_) : hi_; }
  double length() const { return exact_ ? to_double(hi_q_ - lo_q_) : hi_ - lo_; }
  const Rational& lo_exact() const { return lo_q_; }
  const Rational& hi_exact() const { return hi_q_; }
  /// Product of the matrices along the path (exact mode only).
  const Matrix2& composite() const { return composite_; }

  /// Shared endpoint of the two children.
  double split() const {
    if (exact_) return to_double(split_exact());
    if (!split_) {
      double t = system_->map(vertex_, 0).apply(1.0);
      for (auto e = edges_.rbegin(); e != edges_.rend(); ++e) t = (*e)->apply(t);
      split_ = t;
    }
    return *split_;
  }

  const Rational& split_exact() const {
    if (!split_q_) {
      const Matrix2 child = composite_ * *system_->map(vertex_, 0).as_matrix();
      split_q_ = mobius(child, Rational(1));
    }
    return *split_q_;
  }

  /// Sign of x - split, computed exactly in exact mode.
  int compare_to_split(double x) const {
    if (exact_) {
      const Rational xq = from_double(x);
      const Rational& s = split_exact();
      return xq < s ? -1 : (xq > s ? 1 : 0);
    }
    const double s = split();
    return x < s ? -1 : (x > s ? 1 : 0);
  }

  void push(int digit) {
    if (digit != 0 && digit != 1) throw std::invalid_argument("itinerary digit must be 0 or 1");
    if (exact_) {
      const Rational s = split_exact();
      (digit == 0 ? hi_q_ : lo_q_) = s;
      composite_ = composite_ * *system_->map(vertex_, digit).as_matrix();
    } else {
      const double s = split();
      (digit == 0 ? hi_ : lo_) = s;
      edges_.push_back(&system_->map(vertex_, digit));
    }
    split_.reset();
    split_q_.reset();
    vertex_ = digit;
    digits_.push_back(digit);
  }

 private:
  const System* system_;
  int vertex_;
  bool exact_;
  std::vector<int> digits_;
  // floating mode
  std::vector<const Map*> edges_;
  double lo_ = 0, hi_ = 1;
  mutable std::optional<double> split_;
  // exact mode
  Matrix2 composite_;
  Rational lo_q_{0}, hi_q_{1};
  mutable std::optional<Rational> split_q_;
};

/// Exact endpoints of I_start(digits) for affine and linear fractional systems.
inline std::pair<Rational, Rational> interval_exact(const System& s, const Itinerary& it) {
  s.require_valid();
  detail::check_itinerary(it);
  if (!s.exact()) throw std::invalid_argument("exact intervals need affine or linear fractional maps");
  Matrix2 m;
  int v = it.start;
  for (int d : it.digits) {
    m = m * *s.map(v, d).as_matrix();
    v = d;
  }
  return {mobius(m, 0), mobius(m, 1)};
}

/// I_start(i_1..i_n) = [H(0), H(1)] with H = h_{start,i_1} o ... o h_{i_{n-1},i_n}.
/// Exact systems are evaluated in rational arithmetic and rounded.
inline Enclosure interval(const System& s, const Itinerary& it) {
  s.require_valid();
  detail::check_itinerary(it);
  if (s.exact()) {
    auto [lo, hi] = interval_exact(s, it);
    return {to_double(lo), to_double(hi)};
  }
  std::vector<const Map*> path;
  int v = it.start;
  for (int d : it.digits) {
    path.push_back(&s.map(v, d));
    v = d;
  }
  auto composite = [&](double t) {
    for (auto e = path.rbegin(); e != path.rend(); ++e) t = (*e)->apply(t);
    return t;
  };
  return {composite(0.0), composite(1.0)};
}

/// Digits (i_1..i_n) with x in every prefix interval. When x is the shared
/// endpoint of both children the left child (digit 0) is taken.
inline Itinerary itinerary_of(const System& s, int start, double x, int depth) {
  s.require_valid();
  check_vertex(start);
  if (depth < 1) throw std::invalid_argument("itinerary depth must be >= 1");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("point outside [0,1]");
  IntervalTracker t(s, start, true);
  for (int n = 0; n < depth; ++n) t.push(t.compare_to_split(x) <= 0 ? 0 : 1);
  return {start, t.digits()};
}

/// Default cap for exhaustive 2^n enumeration.
inline constexpr int kMaxEnumerationDepth = 24;

namespace detail {

// Enumerates all depth-n intervals at vertex `start` from the inside out:
// begin with [0,1] at vertex i_n and apply h_{i_{k-1}, i_k} until i_0 = start.
template <class Scalar, class Apply>
Scalar max_interval_length(const System& s, int start, int n, Apply apply) {
  Scalar best = 0;
  std::function<void(int, const Scalar&, const Scalar&, int)> visit =
      [&](int v, const Scalar& lo, const Scalar& hi, int applied) {
        if (applied == n) {
          const Scalar len = hi - lo;
          if (len > best) best = len;
          return;
        }
        for (int u = 0; u < 2; ++u) {
          if (applied == n - 1 && u != start) continue;
          const Map& m = s.map(u, v);
          visit(u, apply(m, lo), apply(m, hi), applied + 1);
        }
      };
  for (int v = 0; v < 2; ++v) visit(v, Scalar(0), Scalar(1), 0);
  return best;
}

inline void check_delta_args(const System& s, int start, int n, int max_depth) {
  s.require_valid();
  check_vertex(start);
  if (n < 1) throw std::invalid_argument("delta depth must be >= 1");
  if (n > max_depth) {
    throw std::invalid_argument("delta depth " + std::to_string(n) + " exceeds the configured maximum " +
                                std::to_string(max_depth));
  }
}

}  // namespace detail

/// Largest length of a depth-n interval I_start(i_1..i_n).
inline double delta(const System& s, int start, int n, int max_depth = kMaxEnumerationDepth) {
  detail::check_delta_args(s, start, n, max_depth);
  return detail::max_interval_length<double>(s, start, n, [](const Map& m, double t) { return m.apply(t); });
}

/// Exact variant for affine and linear fractional systems.
inline Rational delta_exact(const System& s, int start, int n, int max_depth = kMaxEnumerationDepth) {
  detail::check_delta_args(s, start, n, max_depth);
  if (!s.exact()) throw std::invalid_argument("exact delta needs affine or linear fractional maps");
  return detail::max_interval_length<Rational>(
      s, start, n, [](const Map& m, const Rational& t) { return *m.apply_exact(t); });
}

/// Endpoints of all depth-n intervals for both vertices, sorted. Level k at
/// vertex v is h_{v,0}(level k-1 at 0) followed by h_{v,1}(level k-1 at 1),
/// the shared point h_{v,0}(1) = h_{v,1}(0) kept once.
template <class Scalar, class Apply>
std::array<std::vector<Scalar>, 2> breakpoints(const System& s, int depth, Apply apply) {
  std::array<std::vector<Scalar>, 2> level{std::vector<Scalar>{Scalar(0), Scalar(1)},
                                           std::vector<Scalar>{Scalar(0), Scalar(1)}};
  for (int k = 0; k < depth; ++k) {
    std::array<std::vector<Scalar>, 2> next;
    for (int v = 0; v < 2; ++v) {
      auto& out = next[v];
      out.reserve(level[0].size() + level[1].size() - 1);
      for (const auto& t : level[0]) out.push_back(apply(s.map(v, 0), t));
      for (std::size_t q = 1; q < level[1].size(); ++q) out.push_back(apply(s.map(v, 1), level[1][q]));
    }
    level = std::move(next);
  }
  return level;
}

/// Breakpoints as doubles, computed exactly and rounded for exact systems.
inline std::array<std::vector<double>, 2> breakpoints(const System& s, int depth) {
  if (s.exact()) {
    auto exact = breakpoints<Rational>(s, depth, [](const Map& m, const Rational& t) { return *m.apply_exact(t); });
    std::array<std::vector<double>, 2> out;
    for (int v = 0; v < 2; ++v) {
      out[v].reserve(exact[v].size());
      for (const auto& q : exact[v]) out[v].push_back(to_double(q));
    }
    return out;
  }
  return breakpoints<double>(s, depth, [](const Map& m, double t) { return m.apply(t); });
}

}  // namespace gdconj
