#include "nsx/locus.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "nsx/errors.hpp"

namespace nsx {

namespace {

constexpr std::size_t kListedCounterexamples = 5;

bool is_zero(const Number& v, double tol) {
  if (v.is_exact()) return v.exact() == 0;
  return std::abs(v.to_double()) <= tol;
}

std::string coefficient_label(const Chart& chart, IndexMask m) {
  const auto idx = mask_indices(m);
  if (idx.empty()) return "scalar";
  std::string s;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += "/\\";
    s += "d(" + chart.coords()[static_cast<std::size_t>(idx[k])] + ")";
  }
  return s;
}

double effective_margin(const Region& region, const LocusOptions& o) {
  return o.margin >= 0 ? o.margin : region.smallest_width() / 8.0;
}

void check_charts(const LocusSpec& locus, const Region& region) {
  if (!locus.empty() && !(locus.chart() == region.chart())) {
    throw ChartMismatch("locus on chart " + locus.chart().name() + ", region on " + region.chart().name());
  }
}

const Chart& evaluation_chart(const Region& region) {
  return region.embedding() ? region.embedding()->target() : region.chart();
}

Point evaluation_point(const Region& region, const Point& p) {
  return region.embedding() ? map_point(*region.embedding(), p) : p;
}

}  // namespace

void LocusSpec::add_equations(std::vector<std::pair<std::string, Expr>> equations) {
  for (auto& [coord, value] : equations) {
    chart_.index_of(coord);
    value = canonicalize(value);
    if (!value.is_constant()) throw DomainError("locus equation " + coord + " = " + value.str() + " is not constant");
  }
  Component c;
  c.equations = std::move(equations);
  components_.push_back(std::move(c));
  clouds_.emplace_back();
}

void LocusSpec::add_parametrized(SmoothMap P, Region over) {
  if (!(P.target() == chart_)) throw ChartMismatch("locus parametrization lands on " + P.target().name());
  if (!(over.chart() == P.source())) throw ChartMismatch("parameter region is on " + over.chart().name());
  std::vector<std::vector<double>> cloud;
  for (const auto& p : sample(over)) cloud.push_back(map_point(P, p).to_doubles());
  Component c;
  c.param = std::move(P);
  c.param_region = std::move(over);
  components_.push_back(std::move(c));
  clouds_.push_back(std::move(cloud));
}

double LocusSpec::distance(const std::vector<double>& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    if (c.param) {
      for (const auto& y : clouds_[k]) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
        best = std::min(best, std::sqrt(s));
      }
    } else {
      double s = 0.0;
      for (const auto& [coord, value] : c.equations) {
        const double v = evaluate(value, Point("", {}, {})).to_double();
        const double d = x[static_cast<std::size_t>(chart_.index_of(coord))] - v;
        s += d * d;
      }
      best = std::min(best, std::sqrt(s));
    }
  }
  return best;
}

std::vector<Point> LocusSpec::on_locus_samples(const std::vector<Point>& region_samples, std::uint64_t seed) const {
  std::vector<Point> out;
  for (const auto& c : components_) {
    if (c.param) {
      for (const auto& p : sample(*c.param_region, seed)) out.push_back(map_point(*c.param, p));
      continue;
    }
    std::vector<std::pair<int, Number>> fixed;
    for (const auto& [coord, value] : c.equations) {
      fixed.emplace_back(chart_.index_of(coord), evaluate(value, Point("", {}, {})));
    }
    std::set<std::string> seen;
    for (const auto& p : region_samples) {
      std::vector<Number> values = p.values;
      for (const auto& [i, v] : fixed) values[static_cast<std::size_t>(i)] = v;
      std::string key;
      for (const auto& v : values) key += v.to_string() + ",";
      if (seen.insert(key).second) out.push_back(chart_.point(values));
    }
  }
  return out;
}

std::string LocusSpec::str() const {
  if (components_.empty()) return "{}";
  std::ostringstream os;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (k) os << " | ";
    const auto& c = components_[k];
    if (c.param) {
      os << "param " << c.param->source().name() << " -> " << c.param->target().name();
      continue;
    }
    os << '{';
    for (std::size_t i = 0; i < c.equations.size(); ++i) {
      if (i) os << ", ";
      os << c.equations[i].first << " = " << c.equations[i].second.str();
    }
    os << '}';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

void LocusReport::add_counterexample(std::string text) {
  ++counterexample_count;
  if (counterexamples.size() < kListedCounterexamples) counterexamples.push_back(std::move(text));
}

void LocusReport::finalize(const LocusOptions& options) {
  const int min_on = options.on_side ? options.min_on : 0;
  const int min_off = options.off_side ? options.min_off : 0;
  pass = counterexample_count == 0 && on_total >= min_on && off_total >= min_off;
  if (pass) return;
  if (counterexample_count == 0) {
    if (on_total < min_on) note += (note.empty() ? "" : "; ") + std::string("too few on-locus samples");
    if (off_total < min_off) note += (note.empty() ? "" : "; ") + std::string("too few off-locus samples");
  }
}

std::string LocusReport::summary() const {
  std::ostringstream os;
  os << on_ok << '/' << on_total << " on-locus, " << off_ok << '/' << off_total << " off-locus";
  if (skipped) os << ", " << skipped << " within margin";
  if (counterexample_count) {
    os << "; " << counterexample_count << " counterexample" << (counterexample_count == 1 ? "" : "s");
    for (const auto& c : counterexamples) os << "; " << c;
  }
  if (!note.empty()) os << "; " << note;
  return os.str();
}

LocusReport verify_vanishing_locus(const DifferentialForm& form, const LocusSpec& locus, const Region& region,
                                   SignRequirement sign, const LocusOptions& options) {
  check_charts(locus, region);
  const Chart& chart = evaluation_chart(region);
  if (!(form.chart() == chart)) throw ChartMismatch("form on " + form.chart().name() + ", samples on " + chart.name());
  const bool top = form.degree() == chart.dim() || form.degree() == 0;
  if (!top && (sign == SignRequirement::Positive || sign == SignRequirement::Negative)) {
    throw DomainError("a sign requirement needs a top-degree form or a scalar");
  }
  const IndexMask top_mask = form.degree() == 0 ? IndexMask{0} : static_cast<IndexMask>((1u << chart.dim()) - 1u);

  LocusReport r;
  LocusOptions opts = options;
  if (locus.empty()) opts.min_on = 0;
  const auto samples = sample(region, options.seed);

  const std::vector<Point> on_samples =
      options.on_side ? locus.on_locus_samples(samples, options.seed) : std::vector<Point>{};
  for (const auto& p : on_samples) {
    ++r.on_total;
    const Point q = evaluation_point(region, p);
    bool ok = true;
    for (const auto& [m, c] : form.terms()) {
      const Number v = evaluate(c, q);
      if (!v.is_exact()) r.exact = false;
      if (!is_zero(v, options.tol)) {
        ok = false;
        r.add_counterexample("on-locus " + p.str() + ": " + coefficient_label(form.chart(), m) + " = " + v.to_string());
        break;
      }
    }
    if (ok) ++r.on_ok;
  }

  const double margin = effective_margin(region, options);
  for (const auto& p : samples) {
    if (!options.off_side) break;
    if (locus.distance(p.to_doubles()) < margin) {
      ++r.skipped;
      continue;
    }
    ++r.off_total;
    const Point q = evaluation_point(region, p);
    bool ok = true;
    std::string detail;
    if (sign == SignRequirement::Positive || sign == SignRequirement::Negative) {
      const Number v = evaluate(form.coefficient(top_mask), q);
      if (!v.is_exact()) r.exact = false;
      const bool zero = is_zero(v, options.tol);
      const int s = zero ? 0 : (v.to_double() > 0 ? 1 : -1);
      ok = s == (sign == SignRequirement::Positive ? 1 : -1);
      if (!ok) detail = "top coefficient = " + v.to_string();
    } else if (sign == SignRequirement::Nonzero) {
      ok = false;
      for (const auto& [m, c] : form.terms()) {
        const Number v = evaluate(c, q);
        if (!v.is_exact()) r.exact = false;
        if (!is_zero(v, options.tol)) {
          ok = true;
          break;
        }
      }
      if (!ok) detail = "all coefficients vanish";
    }
    if (ok) {
      ++r.off_ok;
    } else {
      r.add_counterexample("off-locus " + p.str() + ": " + detail);
    }
  }
  r.finalize(opts);
  return r;
}

LocusReport verify_rank_drop_locus(const SmoothMap& F, const LocusSpec& locus, const Region& region,
                                   int regular_rank, int singular_rank, const LocusOptions& options) {
  check_charts(locus, region);
  if (!(F.source() == region.chart())) throw ChartMismatch("map starts on " + F.source().name() + ", region is on " + region.chart().name());
  LocusReport r;
  const auto samples = sample(region, options.seed);
  for (const auto& p : locus.on_locus_samples(samples, options.seed)) {
    ++r.on_total;
    const auto rk = jacobian_rank_at(F, p);
    if (!rk.exact) r.exact = false;
    if (rk.rank == singular_rank && !rk.undecided) {
      ++r.on_ok;
    } else {
      r.add_counterexample("on-locus " + p.str() + ": Jacobian rank " + std::to_string(rk.rank) +
                           (rk.undecided ? " (undecided)" : "") + ", expected " + std::to_string(singular_rank));
    }
  }
  const double margin = effective_margin(region, options);
  for (const auto& p : samples) {
    if (locus.distance(p.to_doubles()) < margin) {
      ++r.skipped;
      continue;
    }
    ++r.off_total;
    const auto rk = jacobian_rank_at(F, p);
    if (!rk.exact) r.exact = false;
    if (rk.rank == regular_rank && !rk.undecided) {
      ++r.off_ok;
    } else {
      r.add_counterexample("off-locus " + p.str() + ": Jacobian rank " + std::to_string(rk.rank) +
                           (rk.undecided ? " (undecided)" : "") + ", expected " + std::to_string(regular_rank));
    }
  }
  LocusOptions opts = options;
  if (locus.empty()) opts.min_on = 0;
  r.finalize(opts);
  return r;
}

LocusReport verify_fixed_point_set(const VectorField& X, const LocusSpec& locus, const Region& region,
                                   const LocusOptions& options) {
  check_charts(locus, region);
  const Chart& chart = evaluation_chart(region);
  if (!(X.chart() == chart)) throw ChartMismatch("vector field on " + X.chart().name() + ", samples on " + chart.name());
  LocusReport r;
  const auto samples = sample(region, options.seed);
  auto vanishes = [&](const Point& q, std::string& detail) {
    for (std::size_t i = 0; i < X.components().size(); ++i) {
      const Number v = evaluate(X.components()[i], q);
      if (!v.is_exact()) r.exact = false;
      if (!is_zero(v, options.tol)) {
        detail = "component d/d" + chart.coords()[i] + " = " + v.to_string();
        return false;
      }
    }
    return true;
  };
  for (const auto& p : locus.on_locus_samples(samples, options.seed)) {
    ++r.on_total;
    std::string detail;
    if (vanishes(evaluation_point(region, p), detail)) {
      ++r.on_ok;
    } else {
      r.add_counterexample("on-locus " + p.str() + ": " + detail);
    }
  }
  const double margin = effective_margin(region, options);
  for (const auto& p : samples) {
    if (locus.distance(p.to_doubles()) < margin) {
      ++r.skipped;
      continue;
    }
    ++r.off_total;
    std::string detail;
    if (!vanishes(evaluation_point(region, p), detail)) {
      ++r.off_ok;
    } else {
      r.add_counterexample("off-locus " + p.str() + ": field vanishes");
    }
  }
  LocusOptions opts = options;
  if (locus.empty()) opts.min_on = 0;
  r.finalize(opts);
  return r;
}

std::string DividingSetReport::summary() const {
  std::ostringstream os;
  os << "alpha(X) = " << value.str();
  if (declared) {
    os << "; declared " << declared->str() << ": " << equality.str();
    if (ratio && *ratio != 1) os << "; proportional with factor " << to_string(*ratio);
    if (equality.outcome != EqualityVerdict::Outcome::Equal) os << "; difference " << difference.str();
  }
  os << "; zero set: " << locus.summary();
  return os.str();
}

DividingSetReport verify_dividing_set(const DifferentialForm& alpha, const VectorField& X, const LocusSpec& locus,
                                      const Region& region, const std::optional<Expr>& declared,
                                      const LocusOptions& options) {
  if (alpha.degree() != 1) throw DomainError("dividing set needs a 1-form");
  DividingSetReport r;
  r.value = contract(alpha, {X});
  r.declared = declared;
  if (declared) {
    r.equality = semantically_equal(r.value, *declared, options.seed);
    r.difference = canonicalize(r.value - *declared);
    if (r.equality.outcome == EqualityVerdict::Outcome::Equal) {
      r.ratio = Rational(1);
    } else if (!declared->is_zero()) {
      // Proportionality: take the ratio of leading coefficients and confirm
      // it symbolically.
      const Expr a = canonicalize(r.value);
      const Expr b = canonicalize(*declared);
      Rng rng(options.seed);
      std::map<std::string, Number> env;
      std::set<std::string> names = free_symbols(a);
      for (const auto& s : free_symbols(b)) names.insert(s);
      for (int attempt = 0; attempt < 16 && !r.ratio; ++attempt) {
        std::vector<std::string> coords(names.begin(), names.end());
        std::vector<Number> values;
        for (std::size_t i = 0; i < coords.size(); ++i) {
          Rational q(rng.range(-8, 8), rng.range(1, 4));
          q.canonicalize();
          values.emplace_back(q);
        }
        const Point p("", coords, values);
        try {
          const Number vb = evaluate(b, p);
          if (!vb.is_exact() || vb.exact() == 0) continue;
          const Number va = evaluate(a, p);
          if (!va.is_exact()) break;
          const Rational k = va.exact() / vb.exact();
          if (canonicalize(a - Expr(k) * b).is_zero()) r.ratio = k;
          break;
        } catch (const EvaluationError&) {
          continue;
        }
      }
    }
  }
  const DifferentialForm scalar = DifferentialForm::scalar(alpha.chart(), r.value);
  r.locus = verify_vanishing_locus(scalar, locus, region, SignRequirement::Nonzero, options);
  if (r.value.is_zero()) r.locus.note += (r.locus.note.empty() ? "" : "; ") + std::string("alpha(X) vanishes identically");
  r.pass = r.locus.pass && (!declared || r.equality.outcome == EqualityVerdict::Outcome::Equal);
  return r;
}

}  // namespace nsx
