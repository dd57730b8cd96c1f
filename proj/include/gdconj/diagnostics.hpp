// Empirical evidence for singularity: interval-ratio traces along an
// itinerary, the r_n/s_n and t_n sequences of linear fractional targets,
// digit-pair counts and difference quotients of the solution.
#pragma once

#include "gdconj/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdconj {

struct RatioRow {
  int depth = 0;
  int digit = 0;
  double f_len = 0;
  double g_len = 0;
  double ratio = 0;  // g_len / f_len
  // linear fractional targets only
  std::optional<double> rs_ratio;  // r_n / s_n of the matrix product up to depth n
  std::optional<double> t_n;       // uses the edge (i_n, i_{n+1})
  std::optional<double> s_n;       // entries of the product normalised to max |entry| = 1
  std::optional<double> r_plus_s_n;
};

struct RatioTrace {
  int vertex = 0;
  double x = 0;
  bool exact_lengths = false;  // both sides tracked in rational arithmetic
  std::vector<RatioRow> rows;
};

inline constexpr int kMaxTraceDepth = 64;

namespace detail {

inline double ratio_of(const Rational& num, const Rational& den) { return to_double(num / den); }

// t_n = det(A)(rho + 1) / ((b rho + d)((a + b) rho + c + d)) with rho = r_n/s_n.
inline Rational t_value(const Matrix2& A, const Rational& rho) {
  return A.det() * (rho + 1) / ((A.b * rho + A.d) * ((A.a + A.b) * rho + A.c + A.d));
}

inline double max_abs_entry(const Matrix2& m) {
  double best = 0;
  for (const Rational* v : {&m.a, &m.b, &m.c, &m.d}) best = std::max(best, std::abs(to_double(*v)));
  return best;
}

}  // namespace detail

/// Records, along the f-itinerary of x from vertex i, both interval lengths
/// and their ratio at depths 1..depth. When g is affine or linear fractional
/// the r_n/s_n and t_n sequences are attached as well.
inline RatioTrace ratio_trace(const SystemPair& pair, int i, double x, int depth) {
  check_vertex(i);
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("ratio_trace: x outside [0,1]");
  if (depth < 1 || depth > kMaxTraceDepth) {
    throw std::invalid_argument("trace depth must be in [1, " + std::to_string(kMaxTraceDepth) + "]");
  }
  IntervalTracker f(pair.f(), i, true);
  IntervalTracker g(pair.g(), i, true);
  const bool lf = g.exact();
  RatioTrace trace;
  trace.vertex = i;
  trace.x = x;
  trace.exact_lengths = f.exact() && g.exact();
  std::optional<Rational> rho;  // r_n / s_n at the previous row
  for (int n = 1; n <= depth + (lf ? 1 : 0); ++n) {
    const int digit = f.compare_to_split(x) <= 0 ? 0 : 1;
    const int from = f.vertex();
    if (lf && rho) {
      // the previous row's t needs this step's matrix
      trace.rows.back().t_n = to_double(detail::t_value(*pair.g().map(from, digit).as_matrix(), *rho));
    }
    if (n > depth) break;
    f.push(digit);
    g.push(digit);
    RatioRow row;
    row.depth = n;
    row.digit = digit;
    if (trace.exact_lengths) {
      const Rational fl = f.hi_exact() - f.lo_exact();
      const Rational gl = g.hi_exact() - g.lo_exact();
      row.f_len = to_double(fl);
      row.g_len = to_double(gl);
      row.ratio = detail::ratio_of(gl, fl);
    } else {
      row.f_len = f.length();
      row.g_len = g.length();
      row.ratio = row.g_len / row.f_len;
    }
    if (lf) {
      const Matrix2& M = g.composite();
      rho = M.c / M.d;
      row.rs_ratio = to_double(*rho);
      const double scale = detail::max_abs_entry(M);
      row.s_n = to_double(M.d) / scale;
      row.r_plus_s_n = to_double(M.c + M.d) / scale;
    }
    trace.rows.push_back(row);
  }
  return trace;
}

/// Occurrences N_{i,j} of each adjacent digit pair (i_n, i_{n+1}).
struct PatternCounts {
  std::array<std::array<std::size_t, 2>, 2> counts{};
  std::size_t total_depth = 0;

  std::size_t pairs() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
};

inline PatternCounts pattern_counts(const Itinerary& it) {
  if (it.digits.size() < 2) throw std::invalid_argument("pattern counts need at least two digits");
  PatternCounts pc;
  pc.total_depth = it.digits.size();
  for (std::size_t n = 0; n + 1 < it.digits.size(); ++n) {
    const int a = it.digits[n], b = it.digits[n + 1];
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) throw std::invalid_argument("itinerary digit must be 0 or 1");
    ++pc.counts[a][b];
  }
  return pc;
}

struct DerivativeEstimate {
  double value = 0;
  bool depth_cap_reached = false;
};

/// (phi_i(x+h) - phi_i(x-h)) / 2h with enclosures of width h^2 / 100.
inline DerivativeEstimate derivative_estimate(const SystemPair& pair, int i, double x, double h) {
  if (!(h > 0)) throw std::invalid_argument("derivative scale must be positive");
  if (!(x - h >= 0.0 && x + h <= 1.0)) throw std::domain_error("[x-h, x+h] must lie in [0,1]");
  const double tol = h * h * 1e-2;
  const PhiValue up = solve_phi(pair, i, x + h, tol);
  const PhiValue down = solve_phi(pair, i, x - h, tol);
  return {(up.estimate() - down.estimate()) / (2 * h), up.depth_cap_reached || down.depth_cap_reached};
}

}  // namespace gdconj
