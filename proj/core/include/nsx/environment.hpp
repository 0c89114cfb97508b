#pragma once

// Turns scenario declarations into engine objects.
//
// Expressions are evaluated in the context of a chart: coordinate names
// resolve to symbols, declared names to their values. pullback(F, e) and
// restrict(P, e) evaluate e on F's target chart; i_X, star(g, .) use the
// chart of X or g.

#include <map>
#include <set>
#include <string>
#include <variant>

#include "nsx/dsl.hpp"
#include "nsx/forms.hpp"
#include "nsx/locus.hpp"

namespace nsx {

struct ScalarValue {
  Chart chart;
  Expr value;
};

using Value = std::variant<Expr, DifferentialForm>;

struct EnvironmentOptions {
  /// Overrides the random count of regions that sample randomly, floored
  /// at kMinRandomSamples.
  int samples = 0;
};

inline constexpr int kMinRandomSamples = 8;

class Environment {
 public:
  explicit Environment(EnvironmentOptions options = {}) : options_(options) {}

  /// Registers one declaration; throws nsx::Error (DomainError for unknown
  /// names or redeclarations). Check statements are ignored.
  void declare(const dsl::Statement& s);

  const Chart& chart(const std::string& name) const;
  const Metric& metric(const std::string& name) const;
  const DifferentialForm& form(const std::string& name) const;
  const ScalarValue& scalar(const std::string& name) const;
  const VectorField& field(const std::string& name) const;
  const SmoothMap& map(const std::string& name) const;
  const Region& region(const std::string& name) const;
  const LocusSpec& locus(const std::string& name) const;

  bool has_form(const std::string& name) const { return forms_.count(name) > 0; }
  bool has_scalar(const std::string& name) const { return scalars_.count(name) > 0; }

  /// Form or scalar (as a 0-form) by name.
  DifferentialForm form_or_scalar(const std::string& name) const;
  /// Chart of a declared form, scalar, field or map source.
  const Chart& chart_of(const std::string& name) const;

  Value evaluate(const dsl::NodePtr& e, const Chart& context) const;
  Expr evaluate_scalar(const dsl::NodePtr& e, const Chart& context) const;
  DifferentialForm evaluate_form(const dsl::NodePtr& e, const Chart& context) const;
  /// A constant expression (no coordinates).
  Expr evaluate_constant(const dsl::NodePtr& e) const;

  /// Point of the chart from `coord = value` bindings; every coordinate
  /// must be bound exactly once.
  Point point(const Chart& chart, const std::vector<std::pair<std::string, dsl::NodePtr>>& bindings) const;

 private:
  EnvironmentOptions options_;
  std::set<std::string> names_;
  std::set<std::string> opaque_;
  std::map<std::string, Chart> charts_;
  std::map<std::string, Metric> metrics_;
  std::map<std::string, DifferentialForm> forms_;
  std::map<std::string, ScalarValue> scalars_;
  std::map<std::string, VectorField> fields_;
  std::map<std::string, SmoothMap> maps_;
  std::map<std::string, Region> regions_;
  std::map<std::string, LocusSpec> loci_;

  void claim(const std::string& name);
  Value eval(const dsl::Node& n, const Chart* context) const;
};

}  // namespace nsx
