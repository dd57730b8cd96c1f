// The three families of monotone weak contractions of [0,1]: affine maps,
// linear fractional maps and expression-defined maps.
#pragma once

#include "gdconj/expr.hpp"
#include "gdconj/matrix2.hpp"
#include "gdconj/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace gdconj {

/// Thrown when a map violates its family's invariants.
class InvalidMap : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x -> slope * x + intercept with 0 < slope, 0 <= intercept, slope + intercept <= 1.
class AffineMap {
 public:
  AffineMap(Rational slope, Rational intercept) : slope_(std::move(slope)), intercept_(std::move(intercept)) {
    if (!(slope_ > 0)) throw InvalidMap("affine slope must be positive");
    if (intercept_ < 0) throw InvalidMap("affine intercept must be nonnegative");
    if (slope_ + intercept_ > 1) throw InvalidMap("affine map leaves [0,1]: slope + intercept > 1");
    slope_d_ = to_double(slope_);
    intercept_d_ = to_double(intercept_);
  }

  const Rational& slope() const { return slope_; }
  const Rational& intercept() const { return intercept_; }
  double operator()(double x) const { return slope_d_ * x + intercept_d_; }
  Rational operator()(const Rational& x) const { return slope_ * x + intercept_; }
  Matrix2 matrix() const { return {slope_, intercept_, 0, 1}; }

 private:
  Rational slope_, intercept_;
  double slope_d_ = 1, intercept_d_ = 0;
};

/// x -> (a x + b) / (c x + d) for a matrix in the contraction class.
class LFMap {
 public:
  explicit LFMap(Matrix2 m) : matrix_(std::move(m)) {
    auto report = validate_class_m(matrix_);
    if (!report.ok) {
      std::string msg = "matrix " + to_string(matrix_) + " is not in the contraction class:";
      for (const auto& v : report.violations) msg += " " + v + ";";
      throw InvalidMap(msg);
    }
    fast_ = MobiusDouble(matrix_);
  }

  const Matrix2& matrix() const { return matrix_; }
  double operator()(double x) const { return fast_(x); }
  Rational operator()(const Rational& x) const { return mobius(matrix_, x); }

 private:
  Matrix2 matrix_;
  MobiusDouble fast_;
};

/// Number of uniform points used to validate expression maps.
inline constexpr std::size_t kExprValidationGrid = 1025;

/// A map given by a formula in x, optionally with a user-declared Lipschitz norm.
class ExprMap {
 public:
  explicit ExprMap(std::string_view formula, std::optional<Rational> declared_lip = std::nullopt)
      : source_(formula), ast_(parse_expression(formula)), declared_lip_(std::move(declared_lip)) {
    if (declared_lip_ && *declared_lip_ < 0) throw InvalidMap("declared Lipschitz norm must be nonnegative");
    double prev = 0;
    for (std::size_t k = 0; k < kExprValidationGrid; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(kExprValidationGrid - 1);
      double y = 0;
      try {
        y = evaluate(*ast_, x);
      } catch (const std::domain_error& e) {
        throw InvalidMap("'" + source_ + "' is undefined at x=" + std::to_string(x) + ": " + e.what());
      }
      if (!std::isfinite(y)) throw InvalidMap("'" + source_ + "' is not finite at x=" + std::to_string(x));
      if (y < -1e-12 || y > 1 + 1e-12) {
        throw InvalidMap("'" + source_ + "' leaves [0,1] at x=" + std::to_string(x));
      }
      if (k > 0 && !(y > prev)) {
        throw InvalidMap("'" + source_ + "' is not strictly increasing near x=" + std::to_string(x));
      }
      prev = y;
    }
  }

  const std::string& source() const { return source_; }
  const ExprNode& ast() const { return *ast_; }
  const std::optional<Rational>& declared_lip() const { return declared_lip_; }
  double operator()(double x) const { return evaluate(*ast_, x); }
  std::optional<Rational> operator()(const Rational& x) const { return evaluate_exact(*ast_, x); }

 private:
  std::string source_;
  ExprPtr ast_;
  std::optional<Rational> declared_lip_;
};

enum class MapKind { affine, lf, expr };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::affine:
      return "affine";
    case MapKind::lf:
      return "lf";
    case MapKind::expr:
      return "expr";
  }
  return "?";
}

class Map {
 public:
  using Variant = std::variant<AffineMap, LFMap, ExprMap>;

  Map() : v_(AffineMap(1, 0)) {}
  Map(AffineMap m) : v_(std::move(m)) {}
  Map(LFMap m) : v_(std::move(m)) {}
  Map(ExprMap m) : v_(std::move(m)) {}

  static Map affine(Rational slope, Rational intercept) { return AffineMap(std::move(slope), std::move(intercept)); }
  static Map lf(Matrix2 m) { return LFMap(std::move(m)); }
  static Map expr(std::string_view formula, std::optional<Rational> lip = std::nullopt) {
    return ExprMap(formula, std::move(lip));
  }

  const Variant& variant() const { return v_; }
  MapKind kind() const { return static_cast<MapKind>(v_.index()); }
  bool exact() const { return kind() != MapKind::expr; }

  /// Unchecked floating evaluation, clamped to [0,1] to absorb rounding.
  double apply(double x) const {
    const double y = std::visit([x](const auto& m) { return m(x); }, v_);
    return std::clamp(y, 0.0, 1.0);
  }

  /// Exact value at a rational point; std::nullopt when an expression map
  /// produces an irrational value there.
  std::optional<Rational> apply_exact(const Rational& x) const {
    return std::visit([&x](const auto& m) -> std::optional<Rational> { return m(x); }, v_);
  }

  /// Matrix of the map when it is affine or linear fractional.
  std::optional<Matrix2> as_matrix() const {
    if (const auto* a = std::get_if<AffineMap>(&v_)) return a->matrix();
    if (const auto* l = std::get_if<LFMap>(&v_)) return l->matrix();
    return std::nullopt;
  }

  std::string describe() const {
    if (const auto* a = std::get_if<AffineMap>(&v_)) {
      return "affine(slope=" + to_string(a->slope()) + ", intercept=" + to_string(a->intercept()) + ")";
    }
    if (const auto* l = std::get_if<LFMap>(&v_)) return "lf" + to_string(l->matrix());
    const auto& e = std::get<ExprMap>(v_);
    std::string s = "expr(" + e.source();
    if (e.declared_lip()) s += ", lip=" + to_string(*e.declared_lip());
    return s + ")";
  }

 private:
  Variant v_;
};

/// Checked floating evaluation on [0,1].
inline double eval_map(const Map& m, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("map argument outside [0,1]: " + std::to_string(x));
  return m.apply(x);
}

/// Checked exact evaluation; for affine and linear fractional maps this never
/// returns std::nullopt.
inline std::optional<Rational> eval_map_exact(const Map& m, const Rational& x) {
  if (x < 0 || x > 1) throw std::domain_error("map argument outside [0,1]: " + to_string(x));
  return m.apply_exact(x);
}

/// Same function: affine and linear fractional maps compare projectively,
/// expression maps by canonical rendering and declared norm.
inline bool same_map(const Map& l, const Map& r) {
  auto lm = l.as_matrix();
  auto rm = r.as_matrix();
  if (lm && rm) return proportional(*lm, *rm);
  if (lm || rm) return false;
  const auto& le = std::get<ExprMap>(l.variant());
  const auto& re = std::get<ExprMap>(r.variant());
  return to_string(le.ast()) == to_string(re.ast()) && le.declared_lip() == re.declared_lip();
}

struct LipschitzNorm {
  double value = 0;
  std::optional<Rational> exact;  // present for affine, lf and declared norms
  bool estimated = false;         // true for finite-difference estimates
};

/// Step and grid of the finite-difference Lipschitz estimate.
inline constexpr double kLipStep = 1.0 / 1048576.0;  // 2^-20
inline constexpr std::size_t kLipGrid = 4097;

/// Finite-difference estimate of sup |h'| on [0,1]: central differences at
/// interior grid points, one-sided at the two endpoints.
inline double estimate_lipschitz(const ExprMap& m) {
  double best = 0;
  for (std::size_t k = 0; k < kLipGrid; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(kLipGrid - 1);
    const double lo = std::max(0.0, x - kLipStep);
    const double hi = std::min(1.0, x + kLipStep);
    const double q = std::abs(m(hi) - m(lo)) / (hi - lo);
    if (!std::isfinite(q)) throw std::domain_error("non-finite Lipschitz estimate for '" + m.source() + "'");
    best = std::max(best, q);
  }
  return best;
}

inline LipschitzNorm lipschitz_norm(const Map& m) {
  LipschitzNorm n;
  if (const auto* a = std::get_if<AffineMap>(&m.variant())) {
    n.exact = a->slope();
  } else if (const auto* l = std::get_if<LFMap>(&m.variant())) {
    // derivative det/(cx+d)^2 is monotone on [0,1]; the max sits at an endpoint
    const Matrix2& A = l->matrix();
    const Rational det = A.det();
    const Rational at0 = det / (A.d * A.d);
    const Rational at1 = det / ((A.c + A.d) * (A.c + A.d));
    n.exact = at0 > at1 ? at0 : at1;
  } else {
    const auto& e = std::get<ExprMap>(m.variant());
    if (e.declared_lip()) {
      n.exact = *e.declared_lip();
    } else {
      n.value = estimate_lipschitz(e);
      n.estimated = true;
      return n;
    }
  }
  n.value = to_double(*n.exact);
  return n;
}

}  // namespace gdconj
