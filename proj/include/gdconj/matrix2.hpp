// 2x2 rational matrices and their linear fractional transformations
// x -> (a x + b) / (c x + d).
#pragma once

#include "gdconj/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdconj {

struct Matrix2 {
  Rational a{1}, b{0}, c{0}, d{1};

  Rational det() const { return a * d - b * c; }
  Matrix2 transpose() const { return {a, c, b, d}; }
  Matrix2 scaled(const Rational& k) const { return {k * a, k * b, k * c, k * d}; }

  friend Matrix2 operator*(const Matrix2& l, const Matrix2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  friend bool operator==(const Matrix2& l, const Matrix2& r) {
    return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
  }
};

inline std::string to_string(const Matrix2& m) {
  return "(" + to_string(m.a) + "," + to_string(m.b) + ";" + to_string(m.c) + "," +
         to_string(m.d) + ")";
}

/// True when l = k r for some nonzero k, i.e. both define the same map.
inline bool proportional(const Matrix2& l, const Matrix2& r) {
  const Rational lv[4] = {l.a, l.b, l.c, l.d};
  const Rational rv[4] = {r.a, r.b, r.c, r.d};
  bool l_zero = true, r_zero = true;
  for (int k = 0; k < 4; ++k) {
    l_zero = l_zero && lv[k] == 0;
    r_zero = r_zero && rv[k] == 0;
  }
  if (l_zero || r_zero) return l_zero && r_zero;
  for (int p = 0; p < 4; ++p)
    for (int q = p + 1; q < 4; ++q)
      if (lv[p] * rv[q] != lv[q] * rv[p]) return false;
  return true;
}

/// Proportional matrix with coprime integer entries and d > 0 (or c > 0 when d = 0).
inline Matrix2 integer_form(const Matrix2& m) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const Rational* v[4] = {&m.a, &m.b, &m.c, &m.d};
  Integer l = 1, g = 0;
  for (const Rational* e : v) l = boost::multiprecision::lcm(l, Integer(denominator(*e)));
  for (const Rational* e : v) g = boost::multiprecision::gcd(g, Integer(numerator(*e) * (l / denominator(*e))));
  if (g == 0) return m;
  Rational k = Rational(l) / Rational(g);
  if (m.d < 0 || (m.d == 0 && m.c < 0)) k = -k;
  return m.scaled(k);
}

namespace detail {

inline std::string linear_term(const Rational& slope, const Rational& offset) {
  std::string s;
  if (slope != 0) {
    if (slope == 1) s = "x";
    else if (slope == -1) s = "-x";
    else s = to_string(slope) + "x";
  }
  if (offset != 0 || s.empty()) {
    if (s.empty()) s = to_string(offset);
    else s += (offset < 0 ? " - " : " + ") + to_string(offset < 0 ? Rational(-offset) : offset);
  }
  return s;
}

}  // namespace detail

/// "(ax + b)/(cx + d)" in integer form, dropping unit factors: "2x/(x + 1)".
inline std::string formula(const Matrix2& m) {
  const Matrix2 n = integer_form(m);
  std::string num = detail::linear_term(n.a, n.b);
  if (n.a != 0 && n.b != 0) num = "(" + num + ")";
  if (n.c == 0 && n.d == 1) return num;
  std::string den = detail::linear_term(n.c, n.d);
  if (n.c != 0 && n.d != 0) den = "(" + den + ")";
  return num + "/" + den;
}

/// Exact value of the transformation at a rational point. Throws
/// std::domain_error if the denominator vanishes.
inline Rational mobius(const Matrix2& m, const Rational& x) {
  const Rational den = m.c * x + m.d;
  if (den == 0) throw std::domain_error("linear fractional denominator vanishes at " + to_string(x));
  return (m.a * x + m.b) / den;
}

/// Same transformation with precomputed double coefficients.
struct MobiusDouble {
  double a = 1, b = 0, c = 0, d = 1;

  MobiusDouble() = default;
  explicit MobiusDouble(const Matrix2& m)
      : a(to_double(m.a)), b(to_double(m.b)), c(to_double(m.c)), d(to_double(m.d)) {}

  double operator()(double x) const { return (a * x + b) / (c * x + d); }
};

struct ClassMReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Membership in the class of matrices whose transformation is a strictly
/// increasing weak contraction of [0,1]:
///   0 < a + b <= c + d,   d > b >= 0,   ad - bc > 0,   sqrt(ad - bc) <= min(d, c + d).
/// The square-root condition is decided by squaring; min(d, c+d) is positive
/// whenever the earlier conditions hold.
inline ClassMReport validate_class_m(const Matrix2& m) {
  ClassMReport r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.violations.push_back(std::move(msg));
  };
  const Rational top = m.a + m.b;
  const Rational bottom = m.c + m.d;
  if (!(top > 0)) fail("a+b > 0 fails");
  if (!(top <= bottom)) fail("a+b <= c+d fails");
  if (!(m.d > m.b)) fail("d > b fails");
  if (!(m.b >= 0)) fail("b >= 0 fails");
  const Rational det = m.det();
  if (!(det > 0)) fail("ad-bc > 0 fails");
  const Rational lower = m.d < bottom ? m.d : bottom;
  if (lower <= 0 || (det > 0 && det > lower * lower)) fail("sqrt(ad-bc) <= min(d, c+d) fails");
  return r;
}

}  // namespace gdconj
