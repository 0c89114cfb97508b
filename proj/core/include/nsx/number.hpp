#pragma once

#include <gmpxx.h>

#include <string>
#include <variant>

namespace nsx {

using Rational = mpq_class;

/// "p" or "p/q" in lowest terms.
std::string to_string(const Rational& q);

/// Parses "p" or "p/q" (optional leading '-'); throws DomainError.
Rational parse_rational(const std::string& text);

/// A scalar value that is either an exact rational or a binary64
/// approximation. Arithmetic stays exact while both operands are exact.
class Number {
 public:
  Number() : value_(Rational(0)) {}
  Number(Rational q);  // NOLINT(google-explicit-constructor)
  Number(double d);    // NOLINT(google-explicit-constructor)
  Number(long v) : Number(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  Number(int v) : Number(Rational(v)) {}   // NOLINT(google-explicit-constructor)

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const;
  double to_double() const;
  int sign() const;
  bool is_finite() const;

  std::string to_string() const;

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  /// Throws EvaluationError on exact division by zero.
  friend Number operator/(const Number& a, const Number& b);
  Number operator-() const;

 private:
  std::variant<Rational, double> value_;
};

}  // namespace nsx
