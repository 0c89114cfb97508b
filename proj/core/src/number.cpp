#include "nsx/number.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nsx/errors.hpp"

namespace nsx {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0) {
    throw DomainError("not a rational literal: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

Number::Number(Rational q) : value_(std::move(q)) {
  std::get<Rational>(value_).canonicalize();
}

Number::Number(double d) : value_(d) {}

const Rational& Number::exact() const {
  if (!is_exact()) throw DomainError("number is not exact");
  return std::get<Rational>(value_);
}

double Number::to_double() const {
  if (is_exact()) return std::get<Rational>(value_).get_d();
  return std::get<double>(value_);
}

int Number::sign() const {
  if (is_exact()) return sgn(std::get<Rational>(value_));
  const double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

bool Number::is_finite() const {
  return is_exact() || std::isfinite(std::get<double>(value_));
}

std::string Number::to_string() const {
  if (is_exact()) return nsx::to_string(std::get<Rational>(value_));
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << std::get<double>(value_);
  return os.str();
}

Number operator+(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() + b.exact()));
  return Number(a.to_double() + b.to_double());
}

Number operator-(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() - b.exact()));
  return Number(a.to_double() - b.to_double());
}

Number operator*(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() * b.exact()));
  return Number(a.to_double() * b.to_double());
}

Number operator/(const Number& a, const Number& b) {
  if (b.is_exact() && b.exact() == 0) throw EvaluationError("division by zero");
  if (a.is_exact() && b.is_exact()) return Number(Rational(a.exact() / b.exact()));
  return Number(a.to_double() / b.to_double());
}

Number Number::operator-() const {
  if (is_exact()) return Number(Rational(-exact()));
  return Number(-to_double());
}

}  // namespace nsx
