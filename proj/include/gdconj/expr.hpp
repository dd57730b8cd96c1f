// Arithmetic expressions in one variable x.
//
//   expr     := term (("+"|"-") term)*
//   term     := factor (("*"|"/") factor)*
//   factor   := base ("^" exponent)?
//   base     := rational | "x" | "(" expr ")"
//   exponent := unsigned-literal | "(" ["-"] rational ")"
//   rational := integer | integer "/" positive-integer | decimal-literal
//
// A bare exponent is a single integer or decimal literal, so "x^2/8" reads as
// (x^2)/8; fractional exponents are written "x^(3/2)".
#pragma once

#include "gdconj/rational.hpp"

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace gdconj {

class ExprParseError : public std::invalid_argument {
 public:
  ExprParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Op { constant, variable, add, sub, mul, div, pow };

  Op op = Op::constant;
  Rational value{0};  // literal for constant, exponent for pow
  ExprPtr lhs, rhs;   // pow uses lhs only
};

namespace detail {

inline ExprPtr make_node(ExprNode::Op op, Rational value, ExprPtr lhs = {}, ExprPtr rhs = {}) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->value = std::move(value);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  ExprPtr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw ExprParseError("empty expression", pos_);
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ExprParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) {
      throw ExprParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(ExprNode::Op::add, 0, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_node(ExprNode::Op::sub, 0, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(ExprNode::Op::mul, 0, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = make_node(ExprNode::Op::div, 0, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_base();
    if (accept('^')) return make_node(ExprNode::Op::pow, parse_exponent(), base);
    return base;
  }

  ExprPtr parse_base() {
    skip_ws();
    if (pos_ == src_.size()) throw ExprParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == 'x') {
      ++pos_;
      return make_node(ExprNode::Op::variable, 0);
    }
    if (c == '(') {
      if (auto literal = try_rational_group()) return make_node(ExprNode::Op::constant, *literal);
      ++pos_;
      ExprPtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (is_digit(c)) return make_node(ExprNode::Op::constant, scan_literal());
    throw ExprParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Rational scan_literal() {
    try {
      auto v = scan_unsigned(src_, pos_);
      if (!v) throw ExprParseError("expected a number", pos_);
      return *v;
    } catch (const RationalSyntaxError& e) {
      throw ExprParseError(e.what(), e.position());
    }
  }

  // "(n/d)" or "(-n/d)" as a single constant, the printer's form for non-integers.
  // Restores the position when the group is anything else.
  std::optional<Rational> try_rational_group() {
    const std::size_t start = pos_;
    try {
      ++pos_;
      const bool negative = accept('-');
      skip_ws();
      if (pos_ < src_.size() && is_digit(src_[pos_])) {
        Rational value = scan_literal();
        if (accept('/')) {
          skip_ws();
          if (pos_ < src_.size() && is_digit(src_[pos_])) {
            const Rational den = scan_literal();
            if (den != 0 && accept(')')) return negative ? Rational(-value / den) : Rational(value / den);
          }
        } else if (accept(')')) {
          return negative ? Rational(-value) : value;
        }
      }
    } catch (const ExprParseError&) {
    }
    pos_ = start;
    return std::nullopt;
  }

  // The exponent must be a rational literal; anything else is rejected here.
  Rational parse_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < src_.size() && is_digit(src_[pos_])) return scan_literal();
    if (!accept('(')) throw ExprParseError("non-rational exponent", start);
    bool negative = accept('-');
    skip_ws();
    if (pos_ == src_.size() || !is_digit(src_[pos_])) throw ExprParseError("non-rational exponent", start);
    Rational value = scan_literal();
    if (accept('/')) {
      skip_ws();
      const std::size_t den_pos = pos_;
      if (pos_ == src_.size() || !is_digit(src_[pos_])) throw ExprParseError("non-rational exponent", start);
      Rational den = scan_literal();
      if (den == 0) throw ExprParseError("zero denominator in exponent", den_pos);
      value /= den;
    }
    if (!accept(')')) throw ExprParseError("non-rational exponent", start);
    return negative ? Rational(-value) : value;
  }
};

}  // namespace detail

inline ExprPtr parse_expression(std::string_view source) {
  return detail::ExprParser(source).parse();
}

/// Fully parenthesised rendering that parses back to an equivalent tree.
inline std::string to_string(const ExprNode& n) {
  using Op = ExprNode::Op;
  switch (n.op) {
    case Op::constant:
      return "(" + to_string(n.value) + ")";
    case Op::variable:
      return "x";
    case Op::pow:
      return "(" + to_string(*n.lhs) + ")^(" + to_string(n.value) + ")";
    default:
      break;
  }
  const char* sym = n.op == Op::add ? "+" : n.op == Op::sub ? "-" : n.op == Op::mul ? "*" : "/";
  return "(" + to_string(*n.lhs) + sym + to_string(*n.rhs) + ")";
}

/// Floating evaluation. Throws std::domain_error on division by zero, a
/// fractional power of a negative number, or a non-finite result.
inline double evaluate(const ExprNode& n, double x) {
  using Op = ExprNode::Op;
  switch (n.op) {
    case Op::constant:
      return to_double(n.value);
    case Op::variable:
      return x;
    case Op::add:
      return evaluate(*n.lhs, x) + evaluate(*n.rhs, x);
    case Op::sub:
      return evaluate(*n.lhs, x) - evaluate(*n.rhs, x);
    case Op::mul:
      return evaluate(*n.lhs, x) * evaluate(*n.rhs, x);
    case Op::div: {
      const double den = evaluate(*n.rhs, x);
      if (den == 0.0) throw std::domain_error("division by zero");
      return evaluate(*n.lhs, x) / den;
    }
    case Op::pow: {
      const double base = evaluate(*n.lhs, x);
      const bool integral = boost::multiprecision::denominator(n.value) == 1;
      if (base < 0 && !integral) throw std::domain_error("fractional power of a negative number");
      if (base == 0 && n.value < 0) throw std::domain_error("zero raised to a negative power");
      const double r = std::pow(base, to_double(n.value));
      if (!std::isfinite(r)) throw std::domain_error("non-finite power");
      return r;
    }
  }
  throw std::logic_error("corrupt expression node");
}

/// Exact evaluation when every intermediate value is rational.
inline std::optional<Rational> evaluate_exact(const ExprNode& n, const Rational& x) {
  using Op = ExprNode::Op;
  if (n.op == Op::constant) return n.value;
  if (n.op == Op::variable) return x;
  auto l = evaluate_exact(*n.lhs, x);
  if (!l) return std::nullopt;
  if (n.op == Op::pow) return exact_pow(*l, n.value);
  auto r = evaluate_exact(*n.rhs, x);
  if (!r) return std::nullopt;
  switch (n.op) {
    case Op::add:
      return *l + *r;
    case Op::sub:
      return *l - *r;
    case Op::mul:
      return *l * *r;
    case Op::div:
      if (*r == 0) throw std::domain_error("division by zero");
      return *l / *r;
    default:
      break;
  }
  throw std::logic_error("corrupt expression node");
}

}  // namespace gdconj
