// Exact rational scalars used for every affine and linear fractional
// coefficient. Backed by Boost.Multiprecision, so values never overflow.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gdconj {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(Integer(num), Integer(den));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact conversion: every finite double is a dyadic rational.
inline Rational from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite value has no rational form");
  return Rational(v);
}

inline std::string to_string(const Rational& r) {
  const Integer& num = boost::multiprecision::numerator(r);
  const Integer& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Thrown by parse_rational; `position` is the offending character offset.
class RationalSyntaxError : public std::invalid_argument {
 public:
  RationalSyntaxError(const std::string& what, std::size_t position)
      : std::invalid_argument(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Reads an unsigned decimal literal "123" or "12.375" starting at pos.
inline std::optional<Rational> scan_unsigned(std::string_view s, std::size_t& pos) {
  const std::size_t start = pos;
  while (pos < s.size() && is_digit(s[pos])) ++pos;
  if (pos == start) return std::nullopt;
  Integer whole(std::string(s.substr(start, pos - start)));
  if (pos < s.size() && s[pos] == '.') {
    const std::size_t frac_start = ++pos;
    while (pos < s.size() && is_digit(s[pos])) ++pos;
    if (pos == frac_start) {
      throw RationalSyntaxError("expected digits after decimal point", pos);
    }
    const std::string frac(s.substr(frac_start, pos - frac_start));
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
    return Rational(whole) + Rational(Integer(frac), scale);
  }
  return Rational(whole);
}

}  // namespace detail

/// Parses "p", "-p/q", "0.125", "-1.5" (surrounding whitespace allowed).
/// The unicode minus sign U+2212 is accepted as well as '-'.
inline Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  } else if (text.substr(pos, 3) == "\xE2\x88\x92") {
    negative = true;
    pos += 3;
  }
  skip_ws();
  auto value = detail::scan_unsigned(text, pos);
  if (!value) throw RationalSyntaxError("expected a number", pos);
  skip_ws();
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    skip_ws();
    const std::size_t den_pos = pos;
    auto den = detail::scan_unsigned(text, pos);
    if (!den || *den == 0) throw RationalSyntaxError("expected a positive denominator", den_pos);
    *value /= *den;
    skip_ws();
  }
  if (pos != text.size()) throw RationalSyntaxError("unexpected trailing characters", pos);
  return negative ? Rational(-*value) : *value;
}

/// Exact n-th root of a nonnegative integer, if it is a perfect power.
inline std::optional<Integer> exact_root(const Integer& value, unsigned n) {
  if (value < 0 || n == 0) return std::nullopt;
  if (n == 1 || value < 2) return value;
  // Binary search on [0, 2^(bits/n + 1)].
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(value)) + 1;
  Integer lo = 0;
  Integer hi = Integer(1) << (bits / n + 1);
  while (lo < hi) {
    Integer mid = (lo + hi + 1) >> 1;
    if (boost::multiprecision::pow(mid, n) <= value) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (boost::multiprecision::pow(lo, n) == value) return lo;
  return std::nullopt;
}

/// base^exponent when the result is rational; std::nullopt otherwise.
/// Throws std::domain_error for 0 raised to a negative power or an even root
/// of a negative base.
inline std::optional<Rational> exact_pow(const Rational& base, const Rational& exponent) {
  const Integer& p = boost::multiprecision::numerator(exponent);
  const Integer& q = boost::multiprecision::denominator(exponent);
  if (base == 0) {
    if (p < 0) throw std::domain_error("zero raised to a negative power");
    if (p == 0) return Rational(1);
    return Rational(0);
  }
  if (q != 1 && base < 0) throw std::domain_error("fractional power of a negative base");
  if (boost::multiprecision::abs(p) > 4096 || q > 4096) return std::nullopt;
  const unsigned root = q.convert_to<unsigned>();
  auto num_root = exact_root(boost::multiprecision::abs(boost::multiprecision::numerator(base)), root);
  auto den_root = exact_root(boost::multiprecision::denominator(base), root);
  if (!num_root || !den_root) return std::nullopt;
  Rational r(*num_root, *den_root);
  if (base < 0) r = -r;  // q == 1 here
  const unsigned power = boost::multiprecision::abs(p).convert_to<unsigned>();
  Rational result(boost::multiprecision::pow(boost::multiprecision::numerator(r), power),
                  boost::multiprecision::pow(boost::multiprecision::denominator(r), power));
  if (p < 0) result = 1 / result;
  return result;
}

/// Sign of (v - sqrt(s)) for s >= 0, decided exactly by squaring.
inline int compare_with_sqrt(const Rational& v, const Rational& s) {
  if (s < 0) throw std::domain_error("square root of a negative rational");
  if (v < 0) return -1;
  const Rational sq = v * v;
  if (sq < s) return -1;
  if (sq > s) return 1;
  return 0;
}

}  // namespace gdconj
