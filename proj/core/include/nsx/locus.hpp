#pragma once

// Deterministic region sampling and verification of declared loci.
//
// Loci are declared, never solved for: either a set of coordinate
// equations (coord = constant) or a parametrization from a lower-dimensional
// region. A locus may be a union of such components. Samples of a region
// live on the region's chart; when the region carries an embedding map
// ("via P") the objects under test are evaluated at the mapped points while
// distances to the locus are measured in the region's own coordinates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsx/forms.hpp"
#include "nsx/pointcheck.hpp"
#include "nsx/rng.hpp"

namespace nsx {

struct Axis {
  Expr lo, hi;
  /// Lattice points on this axis; 0 marks a random axis.
  int resolution = 2;
};

class Region {
 public:
  Region() = default;
  /// Throws DomainError on arity mismatch, non-constant or empty intervals,
  /// or negative resolutions.
  Region(Chart chart, std::vector<Axis> axes, int random_count = 0, bool centered = false);

  const Chart& chart() const { return chart_; }
  const std::vector<Axis>& axes() const { return axes_; }
  int random_count() const { return random_count_; }
  bool centered() const { return centered_; }
  double lo(int axis) const { return bounds_[static_cast<std::size_t>(axis)].first; }
  double hi(int axis) const { return bounds_[static_cast<std::size_t>(axis)].second; }
  double smallest_width() const;

  void set_embedding(SmoothMap P);
  const std::optional<SmoothMap>& embedding() const { return embedding_; }

 private:
  Chart chart_;
  std::vector<Axis> axes_;
  std::vector<std::pair<double, double>> bounds_;
  int random_count_ = 0;
  bool centered_ = false;
  std::optional<SmoothMap> embedding_;
};

/// Lattice axes are sampled at their resolution: endpoints included, or
/// cell midpoints when the region is centered (one point means the
/// midpoint). Random axes take random_count seeded tuples crossed with the
/// lattice; with no random axis, random_count uniform points are appended.
/// Values are exact rationals whenever the interval bounds are rational.
std::vector<Point> sample(const Region& region, std::uint64_t seed = Rng::kDefaultSeed);

/// Evaluates P's components at p.
Point map_point(const SmoothMap& P, const Point& p);

class LocusSpec {
 public:
  struct Component {
    /// Coordinate equations coord = value (value a constant Expr).
    std::vector<std::pair<std::string, Expr>> equations;
    /// Or a parametrization, densely sampled.
    std::optional<SmoothMap> param;
    std::optional<Region> param_region;
  };

  LocusSpec() = default;
  explicit LocusSpec(Chart chart) : chart_(std::move(chart)) {}

  void add_equations(std::vector<std::pair<std::string, Expr>> equations);
  void add_parametrized(SmoothMap P, Region over);

  const Chart& chart() const { return chart_; }
  const std::vector<Component>& components() const { return components_; }
  bool empty() const { return components_.empty(); }

  /// Euclidean distance in chart coordinates (infinity for the empty
  /// locus).
  double distance(const std::vector<double>& x) const;
  /// On-locus samples derived from region samples: projections for
  /// equation components, mapped parameter samples for parametrizations.
  std::vector<Point> on_locus_samples(const std::vector<Point>& region_samples, std::uint64_t seed) const;

  std::string str() const;

 private:
  Chart chart_;
  std::vector<Component> components_;
  std::vector<std::vector<std::vector<double>>> clouds_;
};

struct LocusOptions {
  std::uint64_t seed = Rng::kDefaultSeed;
  /// Negative: 1/8 of the smallest region width.
  double margin = -1.0;
  double tol = 1e-9;
  int min_on = 1;
  int min_off = 8;
  /// Which halves of a vanishing-locus check to run.
  bool on_side = true;
  bool off_side = true;
};

enum class SignRequirement { Positive, Negative, Nonzero, None };

struct LocusReport {
  int on_total = 0;
  int on_ok = 0;
  int off_total = 0;
  int off_ok = 0;
  int skipped = 0;
  bool exact = true;
  std::vector<std::string> counterexamples;
  int counterexample_count = 0;
  std::string note;
  bool pass = false;

  void add_counterexample(std::string text);
  void finalize(const LocusOptions& options);
  std::string summary() const;
};

/// All coefficients of form (evaluated through the region's embedding)
/// vanish at on-locus samples; off-locus the top coefficient satisfies
/// the sign requirement (for a non-top form, Nonzero means some
/// coefficient is nonzero).
LocusReport verify_vanishing_locus(const DifferentialForm& form, const LocusSpec& locus, const Region& region,
                                   SignRequirement sign, const LocusOptions& options = {});

LocusReport verify_rank_drop_locus(const SmoothMap& F, const LocusSpec& locus, const Region& region,
                                   int regular_rank, int singular_rank, const LocusOptions& options = {});

LocusReport verify_fixed_point_set(const VectorField& X, const LocusSpec& locus, const Region& region,
                                   const LocusOptions& options = {});

struct DividingSetReport {
  Expr value;
  std::optional<Expr> declared;
  EqualityVerdict equality;
  /// Constant ratio value / declared when they are proportional.
  std::optional<Rational> ratio;
  Expr difference;
  LocusReport locus;
  bool pass = false;

  std::string summary() const;
};

DividingSetReport verify_dividing_set(const DifferentialForm& alpha, const VectorField& X, const LocusSpec& locus,
                                      const Region& region, const std::optional<Expr>& declared,
                                      const LocusOptions& options = {});

}  // namespace nsx
