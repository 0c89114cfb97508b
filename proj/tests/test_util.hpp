#pragma once
// Shared helpers for the unit tests.

#include <string>
#include <variant>

#include <gtest/gtest.h>

#include "nsx/dsl.hpp"
#include "nsx/environment.hpp"
#include "nsx/expr.hpp"
#include "nsx/forms.hpp"

namespace nsx::test {

inline Expr sym(const std::string& name) { return Expr::symbol(name); }

inline Rational q(long p, long r = 1) {
  Rational v(p, r);
  v.canonicalize();
  return v;
}

/// Declares every statement of a scenario snippet; fails the test on a
/// parse error.
inline Environment load(const std::string& text) {
  auto parsed = dsl::parse(text);
  if (const auto* err = std::get_if<dsl::ParseError>(&parsed)) {
    ADD_FAILURE() << "parse error: " << err->str();
    return Environment{};
  }
  Environment env;
  for (const auto& s : std::get<dsl::Scenario>(parsed).statements) env.declare(s);
  return env;
}

/// Example 2 on R^6 (t1, t2, t3, x1, x2, x3).
inline const char* kExample2 =
    "chart R6 (t1, t2, t3, x1, x2, x3)\n"
    "form w on R6 = d(t1) /\\ d(t2) - 2*x1*(d(t3) /\\ d(x1) + d(x2) /\\ d(x3))"
    " + x2*(d(t3) /\\ d(x2) - d(x1) /\\ d(x3)) + x3*(d(t3) /\\ d(x3) + d(x1) /\\ d(x2))\n";

}  // namespace nsx::test
