#pragma once

// Exact symbolic scalar expressions over named coordinates.
//
// An Expr is an immutable tree. Builders (+, *, pow, exp, ...) only build
// nodes; canonicalize() maps a tree to the unique normal form
//
//     sum of  c * a1^k1 * ... * am^km
//
// with c a nonzero rational and the atoms a_i drawn from
//
//     pi < symbols < opaque functions < exp(u) < sin(u) < cos(u) < (u)^-1
//
// Symbols compare by natural name order (x2 < x10), opaque functions by
// (name, argument, derivative order), and function atoms by their canonical
// argument. Monomials compare lexicographically over their (atom, exponent)
// sequence, a proper prefix sorting first. On the polynomial/pi fragment the
// normal form is unique; transcendental identities are only applied through
// an explicit RewriteSet.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsx/number.hpp"

namespace nsx {

namespace detail {
struct Node;
struct Poly;
}  // namespace detail

/// Transcendental rewrites applied during canonicalization.
struct RewriteSet {
  /// sin(u)^2 -> 1 - cos(u)^2, so sin exponents stay below 2.
  bool pythagorean = true;
  /// exp(a)^m * exp(b)^n -> exp(m*a + n*b); exp(0) -> 1.
  bool exp_merge = true;

  static RewriteSet none() { return {false, false}; }
  friend bool operator==(const RewriteSet&, const RewriteSet&) = default;
};

class Expr {
 public:
  enum class Kind {
    Rational,
    Pi,
    Symbol,
    Sum,
    Product,
    Power,
    Exp,
    Sin,
    Cos,
    Opaque,
    Canonical,
  };

  Expr();
  Expr(int v);                 // NOLINT(google-explicit-constructor)
  Expr(long v);                // NOLINT(google-explicit-constructor)
  Expr(const Rational& q);     // NOLINT(google-explicit-constructor)

  static Expr pi();
  static Expr symbol(std::string name);
  /// Uninterpreted smooth function of one coordinate; `order` counts
  /// derivatives, so opaque("chi", "t", 1) is chi'(t).
  static Expr opaque(std::string name, std::string coord, int order = 0);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, long exponent);
  friend Expr exp(const Expr& u);
  friend Expr sin(const Expr& u);
  friend Expr cos(const Expr& u);

  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  Kind kind() const;
  bool is_canonical() const;
  /// Canonicalizes with the default rewrites and tests for zero.
  bool is_zero() const;
  /// The value if this canonicalizes to a rational constant.
  std::optional<Rational> as_rational() const;
  /// True if no symbol or opaque function occurs (rationals, pi, and
  /// transcendental functions of constants).
  bool is_constant() const;

  /// Deterministic printer; the output is valid scalar syntax for the
  /// scenario language.
  std::string str() const;

  const detail::Node& node() const { return *node_; }
  explicit Expr(std::shared_ptr<const detail::Node> node);

 private:
  std::shared_ptr<const detail::Node> node_;
};

/// Equality of canonical forms under the default rewrites.
bool operator==(const Expr& a, const Expr& b);

Expr canonicalize(const Expr& e, const RewriteSet& rewrites = {});

/// Partial derivative with respect to the symbol `var`; the result is
/// canonical. Opaque atoms differentiate to their next derivative symbol.
Expr differentiate(const Expr& e, const std::string& var,
                   const RewriteSet& rewrites = {});

/// Simultaneous substitution of symbols; opaque arguments must map to
/// symbols (renaming) or stay untouched, otherwise DomainError.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings,
                const RewriteSet& rewrites = {});

/// Symbols occurring in e, including opaque argument coordinates.
std::set<std::string> free_symbols(const Expr& e);

/// Names of opaque functions occurring in e.
std::set<std::string> opaque_functions(const Expr& e);

// ---------------------------------------------------------------------------
// Evaluation

/// A point of a chart: coordinate names and values in chart order.
struct Point {
  std::string chart;
  std::vector<std::string> coords;
  std::vector<Number> values;

  /// Validates arity and finiteness; throws DomainError.
  Point(std::string chart, std::vector<std::string> coords,
        std::vector<Number> values);

  bool is_exact() const;
  std::vector<double> to_doubles() const;
  std::string str() const;
};

/// Numeric realization of an opaque function: value of the order-th
/// derivative at x.
using OpaqueRealization = std::function<double(double x, int order)>;

class OpaqueRegistry {
 public:
  /// Registry preloaded with the smooth bump chi(t) = exp(1 - 1/(1 - t^2))
  /// on |t| < 1, zero outside.
  static const OpaqueRegistry& standard();

  void add(const std::string& name, OpaqueRealization fn);
  bool contains(const std::string& name) const;
  double eval(const std::string& name, double x, int order) const;

 private:
  std::map<std::string, OpaqueRealization> functions_;
};

/// Exact rational when e is free of pi, transcendental and opaque atoms and
/// p is exact; otherwise a binary64 value. Throws EvaluationError for
/// unbound symbols, unregistered opaque functions, and division by zero.
Number evaluate(const Expr& e, const Point& p,
                const OpaqueRegistry& registry = OpaqueRegistry::standard());

/// A canonical expression flattened for repeated binary64 evaluation with
/// coordinates bound by position.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, const std::vector<std::string>& coords,
               const OpaqueRegistry& registry = OpaqueRegistry::standard());
  double operator()(const double* values) const;

  struct Program;

 private:
  std::shared_ptr<const Program> program_;
};

// ---------------------------------------------------------------------------
// Equality testing

struct EqualityVerdict {
  enum class Outcome { Equal, NotEqual, Undecided };
  Outcome outcome = Outcome::Undecided;
  /// Witness for NotEqual: symbol values, a's value, b's value.
  std::optional<std::map<std::string, Number>> witness;
  std::optional<Number> value_a, value_b;
  int samples = 0;
  int disagreements = 0;

  std::string str() const;
};

/// Equal if canonical forms coincide; otherwise samples seeded random
/// rational points and reports NotEqual with a witness, or Undecided when
/// every sample agrees.
EqualityVerdict semantically_equal(const Expr& a, const Expr& b,
                                   std::uint64_t seed = 0xC0FFEE,
                                   int trials = 32,
                                   const RewriteSet& rewrites = {},
                                   const OpaqueRegistry& registry =
                                       OpaqueRegistry::standard());

}  // namespace nsx
