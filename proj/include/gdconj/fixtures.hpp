// Built-in example pairs.
#pragma once

#include "gdconj/classify.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gdconj::fixtures {

inline Rational q(long long n, long long d = 1) { return make_rational(n, d); }

/// f: x/2, (x+1)/2 | x/3, (2x+1)/3;  g: x/4, (3x+1)/4 | x/5, (4x+1)/5.
inline SystemPair ex_affine() { return affine_pair({q(1, 2), q(1, 3), q(1, 4), q(1, 5)}); }

/// Affine pair with q = p, whose solutions are both the identity.
inline SystemPair ex_affine_identity() { return affine_pair({q(1, 2), q(1, 3), q(1, 2), q(1, 3)}); }

/// g: x/(x+1), 1/(2-x) | x/(3-x), (3x+1)/(2x+2).
inline SystemPair ex_lf_singular() {
  LFSystemSpec s;
  s.A[0][0] = {1, 0, 1, 1};
  s.A[0][1] = {0, 1, -1, 2};
  s.A[1][0] = {1, 0, -1, 3};
  s.A[1][1] = {3, 1, 2, 2};
  return SystemPair(dyadic_system(), lf_system(s, "ex-lf-singular"));
}

/// g: 2x/(4-x), (4x+2)/(3x+3) | 2x/(12-7x), (4x+2)/(x+5); the smooth family at (-1/2, 1/2).
inline LFSystemSpec ex_lf_smooth_spec() {
  LFSystemSpec s;
  s.A[0][0] = {2, 0, -1, 4};
  s.A[0][1] = {4, 2, 3, 3};
  s.A[1][0] = {2, 0, -7, 12};
  s.A[1][1] = {4, 2, 1, 5};
  return s;
}

inline SystemPair ex_lf_smooth() { return SystemPair(dyadic_system(), lf_system(ex_lf_smooth_spec(), "ex-lf-smooth")); }

/// g: x^2/(x+1), (x+1)/2 | x^(3/2)/8, (7x+1)/8.
inline SystemPair ex_nonlinear() {
  MapGrid g{{{Map::expr("x^2/(x+1)", q(3, 4)), Map::affine(q(1, 2), q(1, 2))},
             {Map::expr("x^(3/2)/8", q(3, 16)), Map::affine(q(7, 8), q(1, 8))}}};
  return SystemPair(dyadic_system(), System(std::move(g), "ex-nonlinear"));
}

/// f = g = dyadic.
inline SystemPair identity_pair() { return SystemPair(dyadic_system(), dyadic_system()); }

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"ex-affine", "ex-lf-singular", "ex-lf-smooth", "ex-nonlinear"};
  return n;
}

inline std::optional<SystemPair> by_name(std::string_view name) {
  if (name == "ex-affine") return ex_affine();
  if (name == "ex-lf-singular") return ex_lf_singular();
  if (name == "ex-lf-smooth") return ex_lf_smooth();
  if (name == "ex-nonlinear") return ex_nonlinear();
  return std::nullopt;
}

}  // namespace gdconj::fixtures
