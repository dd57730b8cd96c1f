// Singularity / smoothness decisions for the solution pair: the affine
// dichotomy, the linear fractional dichotomy with closed forms, the
// admissible (c00, c11) region of the smooth family, and the Lipschitz
// product criterion for general target maps over dyadic sources.
#pragma once

#include "gdconj/systems.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gdconj {

enum class VerdictKind { singular, smooth, identity, unknown };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::singular:
      return "Singular";
    case VerdictKind::smooth:
      return "Smooth";
    case VerdictKind::identity:
      return "Identity";
    case VerdictKind::unknown:
      return "Unknown";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::unknown;
  /// phi_0 and phi_1 as linear fractional matrices; present iff kind == smooth.
  std::optional<std::array<Matrix2, 2>> closed_forms;
  std::string evidence;
  /// Machine-readable evidence (key, value) in insertion order.
  std::vector<std::pair<std::string, std::string>> facts;
};

// ---------------------------------------------------------------- affine --

/// f_{i,0} = p_i x, f_{i,1} = (1-p_i) x + p_i; g likewise with q_i.
struct AffineParams {
  Rational p0, p1, q0, q1;

  void validate() const {
    for (const Rational* v : {&p0, &p1, &q0, &q1}) {
      if (!(*v > 0 && *v < 1)) throw std::invalid_argument("affine parameters must lie in (0,1)");
    }
  }
};

inline System affine_system(const Rational& r0, const Rational& r1, std::string label = "affine") {
  return System({{{Map::affine(r0, 0), Map::affine(1 - r0, r0)}, {Map::affine(r1, 0), Map::affine(1 - r1, r1)}}},
                std::move(label));
}

inline SystemPair affine_pair(const AffineParams& p) {
  p.validate();
  return SystemPair(affine_system(p.p0, p.p1, "f"), affine_system(p.q0, p.q1, "g"));
}

namespace detail {

// Slope split h_{i,0}(1) of each row when every map of s is affine.
inline std::optional<std::array<Rational, 2>> affine_splits(const System& s) {
  auto mats = s.matrices();
  if (!mats) return std::nullopt;
  for (const auto& row : *mats)
    for (const auto& m : row)
      if (m.c != 0) return std::nullopt;
  return std::array<Rational, 2>{mobius((*mats)[0][0], 1), mobius((*mats)[1][0], 1)};
}

}  // namespace detail

/// Parameters of a pair whose eight maps are all affine. A compatible affine
/// system is always of the form above, so p_i = f_{i,0}(1), q_i = g_{i,0}(1).
inline std::optional<AffineParams> affine_params(const SystemPair& pair) {
  auto fp = detail::affine_splits(pair.f());
  auto gp = detail::affine_splits(pair.g());
  if (!fp || !gp) return std::nullopt;
  return AffineParams{(*fp)[0], (*fp)[1], (*gp)[0], (*gp)[1]};
}

inline Verdict classify_affine(const AffineParams& p) {
  p.validate();
  Verdict v;
  const std::array<Rational, 4> ratios{p.q0 / p.p0, (1 - p.q0) / (1 - p.p0), p.q1 / p.p1, (1 - p.q1) / (1 - p.p1)};
  std::string set = "{";
  for (std::size_t k = 0; k < ratios.size(); ++k) set += (k ? ", " : "") + to_string(ratios[k]);
  set += "}";
  v.facts.emplace_back("ratio_set", set);
  if (p.p0 == p.q0 && p.p1 == p.q1) {
    v.kind = VerdictKind::identity;
    v.evidence = "p = q: the systems coincide and phi_0 = phi_1 = identity";
  } else {
    v.kind = VerdictKind::singular;
    v.evidence = "p != q: ratio set " + set + " is not identically 1, step ratios cannot converge to 1 a.e.";
  }
  return v;
}

// ------------------------------------------------------ linear fractional --

/// Target matrices A[i][j] with g_{i,j}(x) = Phi(A[i][j]; x).
struct LFSystemSpec {
  MatrixGrid A;
};

struct SpecReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Class membership of every matrix plus the row chain
/// 0 = b_{i,0} < a_{i,0}/(c_{i,0}+d_{i,0}) = b_{i,1}/d_{i,1} < (a_{i,1}+b_{i,1})/(c_{i,1}+d_{i,1}) = 1.
inline SpecReport validate_lf_spec(const LFSystemSpec& s) {
  SpecReport r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.violations.push_back(std::move(msg));
  };
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      auto m = validate_class_m(s.A[i][j]);
      for (const auto& v : m.violations) fail("A[" + std::to_string(i) + "][" + std::to_string(j) + "]: " + v);
    }
    if (!r.ok) continue;
    const Matrix2& L = s.A[i][0];
    const Matrix2& R = s.A[i][1];
    const std::string row = "row " + std::to_string(i) + ": ";
    if (L.b != 0) fail(row + "b_{i,0} != 0");
    const Rational mid_left = L.a / (L.c + L.d);
    const Rational mid_right = R.b / R.d;
    if (mid_left != mid_right) fail(row + "a_{i,0}/(c_{i,0}+d_{i,0}) != b_{i,1}/d_{i,1}");
    if (!(mid_left > 0 && mid_left < 1)) fail(row + "split point not inside (0,1)");
    if (R.a + R.b != R.c + R.d) fail(row + "(a_{i,1}+b_{i,1})/(c_{i,1}+d_{i,1}) != 1");
  }
  return r;
}

inline void require_valid(const LFSystemSpec& s) {
  auto r = validate_lf_spec(s);
  if (r.ok) return;
  std::string msg = "invalid linear fractional system:";
  for (const auto& v : r.violations) msg += " " + v + ";";
  throw std::invalid_argument(msg);
}

inline std::optional<LFSystemSpec> lf_spec_of(const System& s) {
  auto m = s.matrices();
  if (!m) return std::nullopt;
  return LFSystemSpec{*m};
}

inline System lf_system(const LFSystemSpec& s, std::string label = "g") {
  MapGrid maps;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) maps[i][j] = Map::lf(s.A[i][j]);
  return System(std::move(maps), std::move(label));
}

inline SystemPair lf_pair(const LFSystemSpec& s) { return SystemPair(dyadic_system(), lf_system(s)); }

/// alpha_i = (c_{i,0} + d_{i,0}) / a_{i,0} - 2, which must equal d_{i,1}/b_{i,1} - 2.
inline Rational alpha(const LFSystemSpec& s, int i) {
  check_vertex(i);
  require_valid(s);
  const Matrix2& L = s.A[i][0];
  const Matrix2& R = s.A[i][1];
  const Rational from_left = (L.c + L.d) / L.a - 2;
  const Rational from_right = R.d / R.b - 2;
  if (from_left != from_right) {
    throw std::invalid_argument("alpha_" + std::to_string(i) + " is inconsistent: " + to_string(from_left) +
                                " vs " + to_string(from_right));
  }
  return from_left;
}

/// Closed form x / (-c x + 1 + c) as a matrix.
inline Matrix2 smooth_solution_matrix(const Rational& c) { return {1, 0, -c, 1 + c}; }

/// Dichotomy for dyadic sources: smooth iff Phi(A_{i,j}^T; alpha_i) = alpha_j
/// for all four edges, singular otherwise.
inline Verdict classify_lf(const LFSystemSpec& s) {
  require_valid(s);
  const std::array<Rational, 2> a{alpha(s, 0), alpha(s, 1)};
  Verdict v;
  v.facts.emplace_back("alpha_0", to_string(a[0]));
  v.facts.emplace_back("alpha_1", to_string(a[1]));
  std::vector<std::string> failed;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Matrix2& A = s.A[i][j];
      const Rational den = A.b * a[i] + A.d;  // positive for valid specs
      if (den == 0) throw std::logic_error("transpose map undefined at alpha");
      const Rational image = (A.a * a[i] + A.c) / den;
      const std::string key = "Phi(A" + std::to_string(i) + std::to_string(j) + "^T; alpha_" + std::to_string(i) + ")";
      v.facts.emplace_back(key, to_string(image));
      if (image != a[j]) failed.push_back(std::to_string(i) + std::to_string(j));
    }
  }
  if (!failed.empty()) {
    v.kind = VerdictKind::singular;
    v.evidence = "transpose condition fails on edge(s)";
    for (const auto& e : failed) v.evidence += " " + e;
    return v;
  }
  // normalise a_{0,0} = 1 and b_{1,1} = 1 before reading off c_{0,0}, c_{1,1}
  const Rational c00 = s.A[0][0].c / s.A[0][0].a;
  const Rational c11 = s.A[1][1].c / s.A[1][1].b;
  v.kind = VerdictKind::smooth;
  v.closed_forms = std::array<Matrix2, 2>{smooth_solution_matrix(c00), smooth_solution_matrix(c11)};
  v.facts.emplace_back("c00", to_string(c00));
  v.facts.emplace_back("c11", to_string(c11));
  v.evidence = "transpose condition holds on all edges: phi_0(x) = " + formula((*v.closed_forms)[0]) +
               ", phi_1(x) = " + formula((*v.closed_forms)[1]);
  return v;
}

struct RegionReport {
  bool ok = true;
  std::vector<int> violated;  // 1-based indices into the inequality list
};

/// The smooth family's class-membership conditions in (c00, c11):
///   1. c00 >= sqrt(2) - 2             2. c11 <= sqrt(2)
///   3. c00 <= 2 c11 + 1               4. 2 (c00+1)(c11+1) <= (c00+2)^2
///   5. 2 (c11+1) <= (c00+1)(c11+2)^2
inline RegionReport admissible_region(const Rational& c00, const Rational& c11) {
  RegionReport r;
  auto check = [&](int k, bool holds) {
    if (!holds) {
      r.ok = false;
      r.violated.push_back(k);
    }
  };
  check(1, compare_with_sqrt(c00 + 2, 2) >= 0);
  check(2, c11 <= 0 || compare_with_sqrt(c11, 2) <= 0);
  check(3, c00 <= 2 * c11 + 1);
  check(4, 2 * (c00 + 1) * (c11 + 1) <= (c00 + 2) * (c00 + 2));
  check(5, 2 * (c11 + 1) <= (c00 + 1) * (c11 + 2) * (c11 + 2));
  return r;
}

/// c -> -c / (c + 1); its own inverse.
inline Rational involution_c(const Rational& c) {
  if (c == -1) throw std::invalid_argument("involution undefined at c = -1");
  return -c / (c + 1);
}

/// Same region in (c00, c11') with c11' = involution_c(c11):
///   1. c00 >= sqrt(2) - 2             2. c11' >= sqrt(2) - 2
///   3. (c00+1)(c11'+1) <= 2           4. c00 >= 2 (c11'+1)/(c11'+2)^2 - 1
///   5. c11' >= 2 (c00+1)/(c00+2)^2 - 1
/// The list is symmetric under c00 <-> c11'.
inline RegionReport admissible_region_transformed(const Rational& c00, const Rational& c11p) {
  RegionReport r;
  auto check = [&](int k, bool holds) {
    if (!holds) {
      r.ok = false;
      r.violated.push_back(k);
    }
  };
  check(1, compare_with_sqrt(c00 + 2, 2) >= 0);
  check(2, compare_with_sqrt(c11p + 2, 2) >= 0);
  check(3, (c00 + 1) * (c11p + 1) <= 2);
  check(4, c11p + 2 != 0 && c00 >= 2 * (c11p + 1) / ((c11p + 2) * (c11p + 2)) - 1);
  check(5, c00 + 2 != 0 && c11p >= 2 * (c00 + 1) / ((c00 + 2) * (c00 + 2)) - 1);
  return r;
}

/// The unique smooth system (normalised a_{0,0} = a_{1,0} = b_{0,1} = b_{1,1} = 1)
/// with given c00 and c11.
inline LFSystemSpec smooth_family_matrices(const Rational& c00, const Rational& c11) {
  if (c00 == -1) throw std::invalid_argument("smooth family undefined at c00 = -1");
  auto region = admissible_region(c00, c11);
  if (!region.ok) {
    std::string msg = "(c00, c11) = (" + to_string(c00) + ", " + to_string(c11) + ") violates inequalities";
    for (int k : region.violated) msg += " " + std::to_string(k);
    throw std::invalid_argument(msg);
  }
  LFSystemSpec s;
  s.A[0][0] = {1, 0, c00, 2};
  s.A[0][1] = {2 * c11 + 1, 1, 2 * c11 - c00, c00 + 2};
  s.A[1][0] = {1, 0, (c00 * c11 + 2 * c00 - c11) / (c00 + 1), 2 * (c11 + 1) / (c00 + 1)};
  s.A[1][1] = {2 * c11 + 1, 1, c11, c11 + 2};
  return s;
}

// ------------------------------------------------------------ non-linear --

/// Sufficient criterion for dyadic sources: prod ||g_{i,j}||_Lip < 1/16
/// implies both solutions are singular. Otherwise nothing is concluded.
inline Verdict classify_nonlinear(const SystemPair& pair) {
  if (!is_dyadic(pair.f())) throw std::invalid_argument("Lipschitz criterion needs the dyadic source system");
  bool all_exact = true, any_estimated = false;
  Rational exact_product = 1;
  double product = 1;
  Verdict v;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      LipschitzNorm n = lipschitz_norm(pair.g().map(i, j));
      const std::string key = "lip_g" + std::to_string(i) + std::to_string(j);
      if (n.exact) {
        exact_product *= *n.exact;
        v.facts.emplace_back(key, to_string(*n.exact));
      } else {
        all_exact = false;
        v.facts.emplace_back(key, std::to_string(n.value));
      }
      any_estimated = any_estimated || n.estimated;
      product *= n.value;
    }
  }
  const Rational bound = make_rational(1, 16);
  bool below;
  std::string product_text;
  if (all_exact) {
    below = exact_product < bound;
    product_text = to_string(exact_product);
  } else {
    below = product < 1.0 / 16.0;
    product_text = std::to_string(product);
  }
  v.facts.emplace_back("lipschitz_product", product_text);
  v.facts.emplace_back("estimated", any_estimated ? "true" : "false");
  if (below) {
    v.kind = VerdictKind::singular;
    v.evidence = "product of Lipschitz norms " + product_text + " < 1/16";
  } else {
    v.kind = VerdictKind::unknown;
    v.evidence = "product of Lipschitz norms " + product_text + " >= 1/16; the criterion is only sufficient";
  }
  if (any_estimated) v.evidence += " (norms estimated by finite differences)";
  return v;
}

// -------------------------------------------------------------- dispatch --

enum class Theorem { affine, linear_fractional, nonlinear };

inline const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::affine:
      return "affine";
    case Theorem::linear_fractional:
      return "linear_fractional";
    case Theorem::nonlinear:
      return "nonlinear";
  }
  return "?";
}

struct Classification {
  Theorem theorem;
  Verdict verdict;
};

/// Affine pairs use the affine dichotomy; dyadic f with affine/linear
/// fractional g the linear fractional one; dyadic f with any other g the
/// Lipschitz criterion. Anything else: std::nullopt (no theorem applies).
inline std::optional<Classification> classify_pair(const SystemPair& pair) {
  if (auto p = affine_params(pair)) return Classification{Theorem::affine, classify_affine(*p)};
  if (!is_dyadic(pair.f())) return std::nullopt;
  if (auto spec = lf_spec_of(pair.g())) return Classification{Theorem::linear_fractional, classify_lf(*spec)};
  return Classification{Theorem::nonlinear, classify_nonlinear(pair)};
}

}  // namespace gdconj
