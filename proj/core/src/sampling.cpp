#include <algorithm>
#include <cmath>

#include "nsx/errors.hpp"
#include "nsx/locus.hpp"

namespace nsx {

namespace {

Number constant_value(const Expr& e) {
  if (!e.is_constant()) throw DomainError("interval bound " + e.str() + " is not a constant");
  if (auto q = e.as_rational()) return Number(*q);
  return evaluate(e, Point("", {}, {}));
}

constexpr long kRandomGrid = 1L << 16;

}  // namespace

Region::Region(Chart chart, std::vector<Axis> axes, int random_count, bool centered)
    : chart_(std::move(chart)), axes_(std::move(axes)), random_count_(random_count), centered_(centered) {
  if (static_cast<int>(axes_.size()) != chart_.dim()) {
    throw DomainError("region on chart " + chart_.name() + " needs " + std::to_string(chart_.dim()) + " intervals");
  }
  if (random_count_ < 0) throw DomainError("negative random sample count");
  bool has_random = false;
  for (auto& a : axes_) {
    a.lo = canonicalize(a.lo);
    a.hi = canonicalize(a.hi);
    const double lo = constant_value(a.lo).to_double();
    const double hi = constant_value(a.hi).to_double();
    if (!(lo <= hi)) throw DomainError("empty interval [" + a.lo.str() + ", " + a.hi.str() + "]");
    if (a.resolution < 0) throw DomainError("negative lattice resolution");
    if (a.resolution == 0) has_random = true;
    bounds_.emplace_back(lo, hi);
  }
  if (has_random && random_count_ == 0) random_count_ = 1;
}

double Region::smallest_width() const {
  double w = INFINITY;
  for (const auto& [lo, hi] : bounds_) w = std::min(w, hi - lo);
  return w;
}

void Region::set_embedding(SmoothMap P) {
  if (!(P.source() == chart_)) throw ChartMismatch("embedding map starts on " + P.source().name() + ", region is on " + chart_.name());
  embedding_ = std::move(P);
}

namespace {

std::vector<Number> lattice_values(const Axis& a, bool centered) {
  const Number lo = constant_value(a.lo);
  const Number hi = constant_value(a.hi);
  const int r = a.resolution;
  std::vector<Number> out;
  for (int i = 0; i < r; ++i) {
    Number t;
    if (centered || r == 1) {
      t = Number(Rational(2 * i + 1, 2 * r));
    } else {
      t = Number(Rational(i, r - 1));
    }
    if (!t.is_exact()) throw DomainError("lattice fraction must be exact");
    Rational frac = t.exact();
    frac.canonicalize();
    out.push_back(lo + (hi - lo) * Number(frac));
  }
  return out;
}

Number random_value(const Axis& a, Rng& rng) {
  const Number lo = constant_value(a.lo);
  const Number hi = constant_value(a.hi);
  if (lo.is_exact() && hi.is_exact()) {
    Rational frac(rng.range(0, kRandomGrid), kRandomGrid);
    frac.canonicalize();
    return lo + (hi - lo) * Number(frac);
  }
  return Number(rng.uniform(lo.to_double(), hi.to_double()));
}

}  // namespace

std::vector<Point> sample(const Region& region, std::uint64_t seed) {
  const auto& axes = region.axes();
  const std::size_t n = axes.size();
  std::vector<std::vector<Number>> lattice(n);
  std::vector<std::size_t> random_axes;
  for (std::size_t i = 0; i < n; ++i) {
    if (axes[i].resolution == 0) {
      random_axes.push_back(i);
    } else {
      lattice[i] = lattice_values(axes[i], region.centered());
    }
  }

  Rng root(seed);
  std::vector<std::vector<Number>> tuples;
  if (!random_axes.empty()) {
    Rng rng = root.split(1);
    for (int t = 0; t < region.random_count(); ++t) {
      std::vector<Number> tuple;
      for (std::size_t i : random_axes) tuple.push_back(random_value(axes[i], rng));
      tuples.push_back(std::move(tuple));
    }
  } else {
    tuples.emplace_back();
  }

  std::vector<Point> out;
  std::vector<std::size_t> counter(n, 0);
  std::vector<Number> values(n);
  while (true) {
    for (const auto& tuple : tuples) {
      std::size_t r = 0;
      for (std::size_t i = 0; i < n; ++i) {
        values[i] = axes[i].resolution == 0 ? tuple[r++] : lattice[i][counter[i]];
      }
      out.push_back(region.chart().point(values));
    }
    // Odometer over lattice axes, last axis fastest.
    std::size_t i = n;
    bool done = true;
    while (i > 0) {
      --i;
      if (axes[i].resolution == 0) continue;
      if (++counter[i] < lattice[i].size()) {
        done = false;
        break;
      }
      counter[i] = 0;
    }
    if (done) break;
  }

  if (random_axes.empty() && region.random_count() > 0) {
    Rng rng = root.split(2);
    for (int t = 0; t < region.random_count(); ++t) {
      for (std::size_t i = 0; i < n; ++i) values[i] = random_value(axes[i], rng);
      out.push_back(region.chart().point(values));
    }
  }
  return out;
}

Point map_point(const SmoothMap& P, const Point& p) {
  std::vector<Number> values;
  values.reserve(P.components().size());
  for (const auto& c : P.components()) values.push_back(evaluate(c, p));
  return P.target().point(std::move(values));
}

}  // namespace nsx
