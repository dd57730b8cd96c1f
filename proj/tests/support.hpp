// Shared helpers for the test suites.
#pragma once

#include "gdconj/gdconj.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

inline constexpr std::uint64_t kSeed = 0x5eed2026;

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(kSeed);
  return r;
}

inline double uniform(double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

/// Random rational p/q with |p| <= span * q and 1 <= q <= max_den.
inline gdconj::Rational random_rational(long long span = 5, long long max_den = 60) {
  std::uniform_int_distribution<long long> den(1, max_den);
  const long long q = den(rng());
  std::uniform_int_distribution<long long> num(-span * q, span * q);
  return gdconj::make_rational(num(rng()), q);
}

/// k / 2^n for k = 0..2^n.
inline std::vector<double> dyadic_points(int n) {
  std::vector<double> pts;
  const double step = std::ldexp(1.0, -n);
  for (long k = 0; k <= (1L << n); ++k) pts.push_back(k * step);
  return pts;
}

/// x / (-c x + 1 + c), the smooth solution with parameter c.
inline double smooth_closed_form(double c, double x) { return x / (-c * x + 1 + c); }

inline double lf_smooth_phi0(double x) { return 2 * x / (x + 1); }
inline double lf_smooth_phi1(double x) { return 2 * x / (3 - x); }

inline std::vector<gdconj::SystemPair> all_fixtures() {
  std::vector<gdconj::SystemPair> v;
  for (const auto& n : gdconj::fixtures::names()) v.push_back(*gdconj::fixtures::by_name(n));
  return v;
}

}  // namespace testing_support
