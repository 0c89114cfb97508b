#pragma once

// Seeded invariant battery over randomly generated forms, maps, fields and
// expressions. Every instance is checked symbolically (exact canonical
// equality), never by sampling.

#include <cstdint>
#include <string>
#include <vector>

#include "nsx/dsl.hpp"
#include "nsx/forms.hpp"
#include "nsx/rng.hpp"

namespace nsx {

struct PropertyResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::string counterexample;
  bool pass = false;

  std::string summary() const;
};

/// Known names: d_squared, graded_commutativity, functoriality,
/// antiderivation, interior_twice, double_star, canonical_eval,
/// antisymmetry, jacobi, dsl_round_trip. double_star covers every basis
/// form for n <= 6 and ignores count. Throws DomainError for other names.
PropertyResult run_property(const std::string& name, int count, std::uint64_t seed);

const std::vector<std::string>& property_names();

/// Default instance counts of the battery.
int default_property_count(const std::string& name);

namespace random {

/// Chart (x1, ..., xn).
Chart chart(int n, const std::string& name = "R");
enum class Flavor { Polynomial, Transcendental, Opaque };

/// Polynomial in the chart coordinates with small integer coefficients;
/// Transcendental adds exp/sin/cos factors, Opaque also chi factors.
Expr scalar(Rng& rng, const Chart& chart, Flavor flavor = Flavor::Opaque);
DifferentialForm form(Rng& rng, const Chart& chart, int degree, Flavor flavor = Flavor::Opaque);
VectorField field(Rng& rng, const Chart& chart);
/// Polynomial map of degree <= 2.
SmoothMap map(Rng& rng, const Chart& source, const Chart& target);
/// Random polynomial together with an independent evaluation oracle: the
/// expression and its value at p computed by direct integer arithmetic.
struct PolynomialSample {
  Expr expr;
  std::vector<Rational> point;
  Rational value;
};
PolynomialSample polynomial(Rng& rng, int vars);
/// A scenario generated from the grammar (structurally valid, not
/// necessarily meaningful).
dsl::Scenario scenario(Rng& rng);

}  // namespace random

}  // namespace nsx
