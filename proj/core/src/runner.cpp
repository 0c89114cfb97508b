#include "nsx/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "nsx/environment.hpp"
#include "nsx/errors.hpp"
#include "nsx/pointcheck.hpp"
#include "nsx/properties.hpp"
#include "nsx/sympl.hpp"

namespace nsx {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Undecided: return "undecided";
    case Verdict::Error: return "error";
  }
  return "error";
}

std::string verdict_label(const CheckResult& c) {
  if (c.expect == dsl::Expect::Report) return "report-only";
  if (c.verdict == Verdict::Error) return "fail";
  return to_string(c.verdict);
}

bool CheckResult::ok() const {
  switch (expect) {
    case dsl::Expect::Report: return true;
    case dsl::Expect::Pass: return verdict == Verdict::Pass;
    case dsl::Expect::Fail: return verdict == Verdict::Fail;
  }
  return false;
}

bool ScenarioReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok(); });
}

namespace {

constexpr std::size_t kEvidenceLimit = 600;
constexpr int kDefaultPointCount = 10;

std::string clip(std::string s) {
  if (s.size() <= kEvidenceLimit) return s;
  s.resize(kEvidenceLimit);
  return s + "...";
}

struct Outcome {
  Verdict verdict;
  std::string evidence;
};

Outcome pass_if(bool ok, std::string evidence) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(evidence)}; }

class CheckRunner {
 public:
  CheckRunner(const Environment& env, const RunOptions& options) : env_(env), options_(options) {}

  Outcome run(const dsl::CheckDecl& c) {
    const std::string& k = c.kind;
    if (k == "closed") return closed(c);
    if (k == "rank") return rank(c);
    if (k == "gradient_rank") return gradient_rank(c);
    if (k == "nearsympl") return nearsympl(c);
    if (k == "contact") return contact(c);
    if (k == "vanishing_locus") return vanishing_locus(c);
    if (k == "rank_drop_locus") return rank_drop_locus(c);
    if (k == "fixed_points") return fixed_points(c);
    if (k == "dividing_set") return dividing_set(c);
    if (k == "pullback_eq") return pullback_eq(c);
    if (k == "equal") return equal(c);
    if (k == "bracket_table") return bracket_table(c);
    if (k == "stabilize") return stabilize(c);
    if (k == "fibre_sign") return fibre_sign(c);
    if (k == "property") return property(c);
    throw DomainError("unknown check kind '" + k + "'");
  }

 private:
  const Environment& env_;
  const RunOptions& options_;

  // Argument helpers ---------------------------------------------------------

  static const std::string& arg(const dsl::CheckDecl& c, std::size_t i, const char* what) {
    if (c.args.size() <= i) throw DomainError(c.kind + " needs " + what);
    return c.args[i];
  }

  static void arity(const dsl::CheckDecl& c, std::size_t n) {
    if (c.args.size() != n) {
      throw DomainError(c.kind + " takes " + std::to_string(n) + " name" + (n == 1 ? "" : "s") + ", got " +
                        std::to_string(c.args.size()));
    }
  }

  static long option_int(const dsl::CheckDecl& c, const std::string& key, long fallback) {
    auto v = c.option(key);
    if (!v) return fallback;
    if (v->empty() || !std::all_of(v->begin(), v->end(), [](unsigned char ch) { return std::isdigit(ch) != 0; })) {
      throw DomainError("option " + key + " needs an integer, got " + *v);
    }
    return std::stol(*v);
  }

  static long required_int(const dsl::CheckDecl& c, const std::string& key) {
    if (!c.option(key)) throw DomainError(c.kind + " needs '" + key + " N'");
    return option_int(c, key, 0);
  }

  static SignRequirement sign_option(const dsl::CheckDecl& c, SignRequirement fallback) {
    auto v = c.option("sign");
    if (!v) return fallback;
    if (*v == "positive") return SignRequirement::Positive;
    if (*v == "negative") return SignRequirement::Negative;
    if (*v == "nonzero") return SignRequirement::Nonzero;
    if (*v == "none") return SignRequirement::None;
    throw DomainError("sign must be positive, negative, nonzero or none, got " + *v);
  }

  long expected_int(const dsl::CheckDecl& c) const {
    if (!c.value) throw DomainError(c.kind + " needs an expected value '= k'");
    auto q = env_.evaluate_constant(c.value).as_rational();
    if (!q || q->get_den() != 1 || !q->get_num().fits_slong_p()) {
      throw DomainError("expected an integer, got " + dsl::print(c.value));
    }
    return q->get_num().get_si();
  }

  const LocusSpec& locus_of(const dsl::CheckDecl& c) const {
    if (c.locus.empty()) throw DomainError(c.kind + " needs 'on LOCUS'");
    return env_.locus(c.locus);
  }

  const Region& region_of(const dsl::CheckDecl& c) const {
    if (c.regions.size() != 1) throw DomainError(c.kind + " needs exactly one region 'in R'");
    return env_.region(c.regions[0]);
  }

  Point point_of(const dsl::CheckDecl& c, const Chart& chart) const {
    if (!c.at) throw DomainError(c.kind + " needs a point 'at (...)'");
    return env_.point(chart, *c.at);
  }

  LocusOptions locus_options() const {
    LocusOptions o;
    o.seed = options_.seed;
    o.tol = options_.tol;
    return o;
  }

  static Point evaluation_point(const Region& region, const Point& p) {
    return region.embedding() ? map_point(*region.embedding(), p) : p;
  }

  std::vector<Point> off_locus_points(const LocusSpec& locus, const Region& region) const {
    const double margin = region.smallest_width() / 8.0;
    std::vector<Point> out;
    for (const auto& p : sample(region, options_.seed)) {
      if (locus.distance(p.to_doubles()) >= margin) out.push_back(p);
    }
    return out;
  }

  // Checks ------------------------------------------------------------------

  Outcome closed(const dsl::CheckDecl& c) {
    arity(c, 1);
    const DifferentialForm w = env_.form_or_scalar(c.args[0]);
    if (w.degree() >= w.chart().dim()) return {Verdict::Pass, "top-degree form, closed"};
    const DifferentialForm dw = exterior_derivative(w);
    if (dw.is_zero()) return {Verdict::Pass, "d(" + c.args[0] + ") = 0"};
    return {Verdict::Fail, "d(" + c.args[0] + ") = " + dw.str()};
  }

  static std::string rank_note(const RankResult& r) {
    return r.undecided ? " (undecided)" : r.exact ? " (exact)" : " (numeric)";
  }

  Outcome rank(const dsl::CheckDecl& c) {
    arity(c, 1);
    const DifferentialForm& w = env_.form(c.args[0]);
    const long k = expected_int(c);
    if (c.at) {
      const Point p = point_of(c, w.chart());
      const RankResult r = rank_at(w, p);
      const std::string ev = "rank " + std::to_string(r.rank) + " at " + p.str() + rank_note(r);
      if (r.undecided) return {Verdict::Undecided, ev};
      return pass_if(r.rank == k, ev + ", expected " + std::to_string(k));
    }
    const LocusSpec& locus = locus_of(c);
    const Region& region = region_of(c);
    const std::vector<Point> points =
        c.off ? off_locus_points(locus, region) : locus.on_locus_samples(sample(region, options_.seed), options_.seed);
    int ok = 0, undecided = 0;
    std::string witness;
    for (const auto& p : points) {
      const RankResult r = rank_at(w, evaluation_point(region, p));
      if (r.undecided) {
        ++undecided;
      } else if (r.rank == k) {
        ++ok;
      } else if (witness.empty()) {
        witness = "; rank " + std::to_string(r.rank) + " at " + p.str();
      }
    }
    const int n = static_cast<int>(points.size());
    const int floor = c.off ? kMinRandomSamples : 1;
    std::ostringstream ev;
    ev << ok << '/' << n << (c.off ? " off-locus" : " on-locus") << " samples of rank " << k;
    if (undecided) ev << ", " << undecided << " undecided";
    ev << witness;
    if (n < floor) ev << "; too few samples";
    if (ok == n && n >= floor) return {Verdict::Pass, ev.str()};
    if (ok + undecided == n && n >= floor) return {Verdict::Undecided, ev.str()};
    return {Verdict::Fail, ev.str()};
  }

  Outcome gradient_rank(const dsl::CheckDecl& c) {
    arity(c, 1);
    const DifferentialForm& w = env_.form(c.args[0]);
    const Point p = point_of(c, w.chart());
    const long k = expected_int(c);
    const long power = option_int(c, "power", 1);
    const DifferentialForm target = power == 1 ? w : wedge_power(w, static_cast<int>(power));
    const GradientMatrix g = gradient_at(target, p);
    std::ostringstream ev;
    ev << "gradient of " << c.args[0];
    if (power != 1) ev << '^' << power;
    ev << " at " << p.str() << ": " << g.matrix.rows << 'x' << g.matrix.cols << " matrix of rank " << g.rank.rank
       << rank_note(g.rank) << ", expected " << k;
    if (g.rank.undecided) return {Verdict::Undecided, ev.str()};
    return pass_if(g.rank.rank == k, ev.str());
  }

  Outcome nearsympl(const dsl::CheckDecl& c) {
    arity(c, 1);
    const DifferentialForm& w = env_.form(c.args[0]);
    if (c.at) {
      const auto v = near_symplectic_point_test(w, point_of(c, w.chart()));
      if (v.undecided) return {Verdict::Undecided, v.summary()};
      return pass_if(v.pass, v.summary());
    }
    const LocusSpec& locus = locus_of(c);
    const Region& region = region_of(c);
    const long count = option_int(c, "count", kDefaultPointCount);
    std::vector<Point> points =
        c.off ? off_locus_points(locus, region) : locus.on_locus_samples(sample(region, options_.seed), options_.seed);
    if (static_cast<long>(points.size()) > count) points.erase(points.begin() + count, points.end());
    int ok = 0, undecided = 0;
    std::string first_bad, first_summary;
    for (const auto& p : points) {
      const auto v = near_symplectic_point_test(w, evaluation_point(region, p));
      bool good;
      if (c.off) {
        good = !v.pass && v.reason == "nondegenerate point";
      } else {
        good = v.pass;
      }
      if (v.undecided) {
        ++undecided;
      } else if (good) {
        ++ok;
        if (first_summary.empty()) first_summary = v.summary();
      } else if (first_bad.empty()) {
        first_bad = p.str() + ": " + v.summary();
      }
    }
    const int n = static_cast<int>(points.size());
    std::ostringstream ev;
    if (c.off) {
      ev << ok << '/' << n << " off-locus points rejected as nondegenerate";
    } else {
      ev << ok << '/' << n << " on-locus points pass";
      if (!first_summary.empty()) ev << " (first: " << first_summary << ")";
    }
    if (undecided) ev << ", " << undecided << " undecided";
    if (!first_bad.empty()) ev << "; " << first_bad;
    if (n < count) ev << "; only " << n << " points available";
    if (ok == n && n >= count) return {Verdict::Pass, ev.str()};
    if (ok + undecided == n && n >= count) return {Verdict::Undecided, ev.str()};
    return {Verdict::Fail, ev.str()};
  }

  Outcome contact(const dsl::CheckDecl& c) {
    arity(c, 1);
    const DifferentialForm& a = env_.form(c.args[0]);
    if (c.regions.empty()) {
      const ContactVerdict v = contact_test(a, nullptr, {});
      return pass_if(v.pass, v.summary());
    }
    bool all = true;
    std::set<bool> orientations;
    long positive = 0, negative = 0, zero = 0, degenerate = 0, total = 0;
    std::ostringstream ev;
    for (std::size_t i = 0; i < c.regions.size(); ++i) {
      const Region& r = env_.region(c.regions[i]);
      const SmoothMap* P = r.embedding() ? &*r.embedding() : nullptr;
      const ContactVerdict v = contact_test(a, P, sample(r, options_.seed));
      all = all && v.pass;
      if (v.pass) orientations.insert(v.orientation_reversed);
      positive += v.positive;
      negative += v.negative;
      zero += v.zero;
      degenerate += v.degenerate;
      total += v.samples;
      if (i) ev << "; ";
      ev << c.regions[i] << ": " << v.summary();
    }
    const bool uniform = all && orientations.size() <= 1;
    std::ostringstream head;
    head << total << " samples: " << positive << " positive, " << negative << " negative, " << zero << " zero";
    if (degenerate) head << ", " << degenerate << " degenerate";
    if (all && !uniform) head << "; sign differs between regions";
    return pass_if(uniform, head.str() + "; " + ev.str());
  }

  Outcome vanishing_locus(const dsl::CheckDecl& c) {
    arity(c, 1);
    const DifferentialForm w = env_.form_or_scalar(c.args[0]);
    const LocusSpec& locus = locus_of(c);
    const Region& region = region_of(c);
    const SignRequirement sign = sign_option(c, SignRequirement::Nonzero);
    LocusOptions opts = locus_options();
    auto witness = c.option("witness");
    if (!witness) {
      const LocusReport r = verify_vanishing_locus(w, locus, region, sign, opts);
      return pass_if(r.pass, r.summary());
    }
    const DifferentialForm v = env_.form_or_scalar(*witness);
    LocusOptions on = opts, off = opts;
    on.off_side = false;
    off.on_side = false;
    const LocusReport a = verify_vanishing_locus(w, locus, region, SignRequirement::None, on);
    const LocusReport b = verify_vanishing_locus(v, locus, region, sign, off);
    LocusReport m;
    m.on_total = a.on_total;
    m.on_ok = a.on_ok;
    m.off_total = b.off_total;
    m.off_ok = b.off_ok;
    m.skipped = b.skipped;
    m.exact = a.exact && b.exact;
    for (const auto* part : {&a, &b}) {
      for (const auto& ce : part->counterexamples) m.add_counterexample(ce);
      m.counterexample_count += part->counterexample_count - static_cast<int>(part->counterexamples.size());
    }
    m.note = a.note;
    if (!b.note.empty()) m.note += (m.note.empty() ? "" : "; ") + b.note;
    m.pass = a.pass && b.pass;
    return pass_if(m.pass, m.summary() + " (" + c.args[0] + " on-locus, " + *witness + " off-locus)");
  }

  Outcome rank_drop_locus(const dsl::CheckDecl& c) {
    arity(c, 1);
    const LocusReport r =
        verify_rank_drop_locus(env_.map(c.args[0]), locus_of(c), region_of(c), static_cast<int>(required_int(c, "regular")),
                               static_cast<int>(required_int(c, "singular")), locus_options());
    return pass_if(r.pass, r.summary());
  }

  Outcome fixed_points(const dsl::CheckDecl& c) {
    arity(c, 1);
    const LocusReport r = verify_fixed_point_set(env_.field(c.args[0]), locus_of(c), region_of(c), locus_options());
    return pass_if(r.pass, r.summary());
  }

  Outcome dividing_set(const dsl::CheckDecl& c) {
    arity(c, 2);
    const DifferentialForm& a = env_.form(c.args[0]);
    std::optional<Expr> declared;
    if (c.value) declared = env_.evaluate_scalar(c.value, a.chart());
    const DividingSetReport r =
        verify_dividing_set(a, env_.field(c.args[1]), locus_of(c), region_of(c), declared, locus_options());
    if (declared && r.equality.outcome == EqualityVerdict::Outcome::Undecided) return {Verdict::Undecided, r.summary()};
    return pass_if(r.pass, r.summary());
  }

  // Proportionality a = k b for a rational k, found at a random exact point
  // and confirmed symbolically.
  std::optional<Rational> ratio(const DifferentialForm& a, const DifferentialForm& b) const {
    if (b.is_zero() || a.degree() != b.degree()) return std::nullopt;
    const auto& [mask, cb] = *b.terms().begin();
    const Expr ca = a.coefficient(mask);
    std::set<std::string> names = free_symbols(ca);
    for (const auto& s : free_symbols(cb)) names.insert(s);
    std::vector<std::string> coords(names.begin(), names.end());
    Rng rng(options_.seed);
    for (int attempt = 0; attempt < 16; ++attempt) {
      std::vector<Number> values;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        Rational q(rng.range(-8, 8), rng.range(1, 4));
        q.canonicalize();
        values.emplace_back(q);
      }
      try {
        const Point p("", coords, values);
        const Number vb = evaluate(cb, p);
        if (!vb.is_exact() || vb.exact() == 0) continue;
        const Number va = evaluate(ca, p);
        if (!va.is_exact()) return std::nullopt;
        const Rational k = va.exact() / vb.exact();
        if ((a - Expr(k) * b).is_zero()) return k;
        return std::nullopt;
      } catch (const EvaluationError&) {
        continue;
      }
    }
    return std::nullopt;
  }

  Outcome compare(const DifferentialForm& lhs, const DifferentialForm& rhs, const std::string& label) const {
    if (!(lhs.chart() == rhs.chart())) throw ChartMismatch("comparing forms on " + lhs.chart().name() + " and " + rhs.chart().name());
    if (lhs.degree() != rhs.degree() && !lhs.is_zero() && !rhs.is_zero()) {
      return {Verdict::Fail, label + ": degrees " + std::to_string(lhs.degree()) + " and " + std::to_string(rhs.degree())};
    }
    if (lhs == rhs || (lhs.is_zero() && rhs.is_zero())) return {Verdict::Pass, label + ": Equal (" + lhs.str() + ")"};
    // Canonical forms differ: look for a witness coefficient by coefficient.
    std::set<IndexMask> masks;
    for (const auto& [m, e] : lhs.terms()) masks.insert(m);
    for (const auto& [m, e] : rhs.terms()) masks.insert(m);
    std::ostringstream ev;
    bool not_equal = false;
    for (IndexMask m : masks) {
      const EqualityVerdict v = semantically_equal(lhs.coefficient(m), rhs.coefficient(m), options_.seed);
      if (v.outcome == EqualityVerdict::Outcome::NotEqual) {
        not_equal = true;
        ev << label << ": NotEqual";
        if (m) ev << " in the " << DifferentialForm::basis(lhs.chart(), mask_indices(m)).str() << " coefficient";
        ev << " (" << v.str() << ")";
        break;
      }
    }
    if (!not_equal) ev << label << ": Undecided, canonical forms differ but all samples agree";
    ev << "; lhs = " << lhs.str() << "; rhs = " << rhs.str();
    const DifferentialForm diff = lhs - rhs;
    ev << "; lhs - rhs = " << diff.str();
    if (auto k = ratio(lhs, rhs)) ev << "; lhs = " << to_string(*k) << " * rhs";
    return {not_equal ? Verdict::Fail : Verdict::Undecided, ev.str()};
  }

  Outcome pullback_eq(const dsl::CheckDecl& c) {
    arity(c, 2);
    const SmoothMap& F = env_.map(c.args[0]);
    if (!c.value) throw DomainError("pullback_eq needs '= expected'");
    const DifferentialForm a = env_.form_or_scalar(c.args[1]);
    const DifferentialForm lhs = pullback(F, a);
    const DifferentialForm rhs = env_.evaluate_form(c.value, F.source());
    return compare(lhs, rhs, c.args[0] + "*(" + c.args[1] + ")");
  }

  Outcome equal(const dsl::CheckDecl& c) {
    arity(c, 1);
    if (!c.value) throw DomainError("equal needs '= expected'");
    const DifferentialForm lhs = env_.form_or_scalar(c.args[0]);
    const DifferentialForm rhs = env_.evaluate_form(c.value, lhs.chart());
    return compare(lhs, rhs, c.args[0]);
  }

  Outcome bracket_table(const dsl::CheckDecl& c) {
    arity(c, 1);
    const ScalarValue& h = env_.scalar(c.args[0]);
    const Chart Y = straightening_chart(h.chart.dim());
    if (h.chart.coords() != Y.coords()) {
      throw DomainError("bracket_table needs a graph function on a chart (y1, ..., y" + std::to_string(Y.dim()) + ")");
    }
    const StraighteningResult r = graph_straightening(h.value, h.chart.dim());
    return pass_if(r.pass, "h = " + r.h.str() + ": " + r.summary());
  }

  Outcome stabilize(const dsl::CheckDecl& c) {
    arity(c, 2);
    const DifferentialForm& eta = env_.form(c.args[0]);
    const DifferentialForm& base = env_.form(c.args[1]);
    if (c.regions.empty()) throw DomainError("stabilize needs 'in REGION'");
    std::vector<Point> points;
    for (const auto& name : c.regions) {
      const Region& r = env_.region(name);
      for (const auto& p : sample(r, options_.seed)) points.push_back(evaluation_point(r, p));
    }
    const long kmax = option_int(c, "kmax", 1024);
    const StabilizeResult r = stabilizing_constant_search(eta, base, points, kmax);
    std::string ev = r.summary() + " over " + std::to_string(points.size()) + " samples";
    if (c.value) {
      const long k = expected_int(c);
      return pass_if(r.found && r.K == k, ev + ", expected K = " + std::to_string(k));
    }
    return pass_if(r.found, ev);
  }

  Outcome fibre_sign(const dsl::CheckDecl& c) {
    arity(c, 2);
    const DifferentialForm& T = env_.form(c.args[0]);
    const SmoothMap& F = env_.map(c.args[1]);
    if (!(F.source() == T.chart())) throw ChartMismatch("map " + c.args[1] + " starts on " + F.source().name());
    const int fibre = F.source().dim() - F.target().dim();
    if (T.degree() != fibre) {
      throw DomainError("fibre_sign needs a form of the fibre dimension " + std::to_string(fibre));
    }
    // T on an oriented fibre basis v has the sign of (T ^ F*vol)(v, w) with
    // w lifting a positive base frame: the fibre orientation satisfies
    // vol_fibre ^ F*vol_base = vol.
    const DifferentialForm top = wedge(T, pullback(F, DifferentialForm::volume(F.target())));
    const Expr coef = top.top_coefficient();
    const LocusSpec& locus = locus_of(c);
    const Region& region = region_of(c);
    if (region.embedding()) throw DomainError("fibre_sign samples the map's source chart directly");
    const SignRequirement want = sign_option(c, SignRequirement::None);
    int positive = 0, negative = 0, zero = 0, n = 0;
    std::string witness;
    for (const auto& p : off_locus_points(locus, region)) {
      ++n;
      const Number v = evaluate(coef, p);
      const bool is_zero = v.is_exact() ? v.exact() == 0 : std::abs(v.to_double()) <= options_.tol;
      if (is_zero) {
        ++zero;
        if (witness.empty()) witness = "; zero at " + p.str();
      } else if (v.to_double() > 0) {
        ++positive;
      } else {
        ++negative;
      }
    }
    std::ostringstream ev;
    ev << "T ^ F*vol = " << coef.str() << "; " << n << " off-locus samples: " << positive << " positive, " << negative
       << " negative, " << zero << " zero" << witness << " (fibres oriented by vol_fibre ^ F*vol_base = vol)";
    bool ok = zero == 0 && n >= kMinRandomSamples && (positive == 0 || negative == 0);
    if (want == SignRequirement::Positive) ok = ok && negative == 0;
    if (want == SignRequirement::Negative) ok = ok && positive == 0;
    return pass_if(ok, ev.str());
  }

  Outcome property(const dsl::CheckDecl& c) {
    arity(c, 1);
    const std::string& name = c.args[0];
    const long count = option_int(c, "count", default_property_count(name));
    const PropertyResult r = run_property(name, static_cast<int>(count), options_.seed);
    return pass_if(r.pass, r.summary());
  }
};

std::string statement_name(const dsl::Statement& s) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, dsl::ScenarioHeader>) {
          return d.id;
        } else if constexpr (std::is_same_v<T, dsl::CheckDecl>) {
          return d.kind;
        } else {
          return d.name;
        }
      },
      s);
}

}  // namespace

ScenarioReport run_scenario(const dsl::Scenario& scenario, const RunOptions& options, const std::string& default_id) {
  ScenarioReport report;
  report.id = scenario.id().empty() ? default_id : scenario.id();
  report.anchor = scenario.anchor();
  EnvironmentOptions env_options;
  env_options.samples = options.samples;
  Environment env(env_options);
  CheckRunner runner(env, options);
  int index = 0;
  for (const auto& st : scenario.statements) {
    if (const auto* c = std::get_if<dsl::CheckDecl>(&st)) {
      CheckResult r;
      r.kind = c->kind;
      r.anchor = report.id + "." + std::to_string(++index);
      r.expect = c->expect;
      r.inputs = dsl::print(dsl::Scenario{{*c}});
      if (!r.inputs.empty() && r.inputs.back() == '\n') r.inputs.pop_back();
      try {
        Outcome o = runner.run(*c);
        r.verdict = o.verdict;
        r.evidence = clip(std::move(o.evidence));
      } catch (const std::exception& e) {
        r.verdict = Verdict::Error;
        r.evidence = clip(std::string("error: ") + e.what());
      }
      if (r.expect == dsl::Expect::Report) r.evidence = "computed " + to_string(r.verdict) + "; " + r.evidence;
      report.checks.push_back(std::move(r));
      continue;
    }
    try {
      env.declare(st);
    } catch (const std::exception& e) {
      CheckResult r;
      r.kind = "declaration";
      r.anchor = report.id + ".decl";
      r.inputs = dsl::print(dsl::Scenario{{st}});
      if (!r.inputs.empty() && r.inputs.back() == '\n') r.inputs.pop_back();
      r.verdict = Verdict::Error;
      r.evidence = clip("error: " + statement_name(st) + ": " + e.what());
      report.checks.push_back(std::move(r));
    }
  }
  return report;
}

ScenarioReport run_scenario_text(const std::string& text, const RunOptions& options, const std::string& default_id) {
  auto parsed = dsl::parse(text);
  if (auto* s = std::get_if<dsl::Scenario>(&parsed)) return run_scenario(*s, options, default_id);
  const auto& e = std::get<dsl::ParseError>(parsed);
  ScenarioReport report;
  report.id = default_id;
  CheckResult r;
  r.kind = "parse";
  r.anchor = default_id + ".parse";
  r.verdict = Verdict::Error;
  r.evidence = "error: " + e.str();
  report.checks.push_back(std::move(r));
  return report;
}

}  // namespace nsx
