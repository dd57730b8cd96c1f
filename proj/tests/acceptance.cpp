// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "goldens.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace gdconj;
using fixtures::q;
using testing_support::uniform;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<Rational> family_grid() {
  std::vector<Rational> v;
  for (int k = 0; k <= 20; ++k) v.push_back(q(-1, 2) + q(k, 10));
  return v;
}

// 1. closed forms of ex-lf-smooth at 1025 dyadic points
Outcome closed_form_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const SystemPair pair = fixtures::ex_lf_smooth();
  double worst = 0;
  for (double x : testing_support::dyadic_points(10)) {
    worst = std::max(worst, std::abs(solve_phi(pair, 0, x, 1e-10).estimate() - testing_support::lf_smooth_phi0(x)));
    worst = std::max(worst, std::abs(solve_phi(pair, 1, x, 1e-10).estimate() - testing_support::lf_smooth_phi1(x)));
  }
  const double secs = seconds_since(t0);
  o.require(worst <= 1e-9, "max error " + fmt("%.3g", worst));
  o.require(secs < 5.0, "runtime " + fmt("%.2f s", secs));
  if (o.pass) o.detail = "max error " + fmt("%.3g", worst) + ", " + fmt("%.3f s", secs);
  return o;
}

// 2. functional-equation residuals
Outcome residuals() {
  Outcome o;
  double worst = 0;
  for (const auto& name : fixtures::names()) {
    const double r = residual_max(*fixtures::by_name(name), 101, 1e-8).max_residual;
    worst = std::max(worst, r);
    o.require(r <= 4e-8, name + " residual " + fmt("%.3g", r));
  }
  const double id = residual_max(fixtures::identity_pair(), 101, 1e-8).max_residual;
  o.require(id == 0.0, "identity residual " + fmt("%.3g", id));
  if (o.pass) o.detail = "worst fixture residual " + fmt("%.3g", worst) + ", identity 0";
  return o;
}

// 3. theorem dispatch
Outcome dispatch() {
  Outcome o;
  auto kind = [](const SystemPair& p) { return classify_pair(p)->verdict.kind; };
  o.require(classify_pair(fixtures::ex_affine())->theorem == Theorem::affine, "ex-affine theorem");
  o.require(kind(fixtures::ex_affine()) == VerdictKind::singular, "ex-affine verdict");

  const SystemPair id = fixtures::ex_affine_identity();
  o.require(kind(id) == VerdictKind::identity, "identity verdict");
  for (int i = 0; i < 2; ++i)
    for (const auto& [x, y] : sample_curve(id, i, 10).points) o.require(x == y, "identity curve off diagonal");

  o.require(classify_pair(fixtures::ex_lf_singular())->theorem == Theorem::linear_fractional, "ex-lf-singular theorem");
  o.require(kind(fixtures::ex_lf_singular()) == VerdictKind::singular, "ex-lf-singular verdict");

  const Verdict smooth = classify_pair(fixtures::ex_lf_smooth())->verdict;
  o.require(smooth.kind == VerdictKind::smooth && smooth.closed_forms.has_value(), "ex-lf-smooth verdict");
  if (smooth.closed_forms) {
    o.require(proportional((*smooth.closed_forms)[0], {2, 0, 1, 1}), "phi_0 closed form");
    o.require(proportional((*smooth.closed_forms)[1], {2, 0, -1, 3}), "phi_1 closed form");
  }

  const auto nl = classify_pair(fixtures::ex_nonlinear());
  o.require(nl->theorem == Theorem::nonlinear && nl->verdict.kind == VerdictKind::singular, "ex-nonlinear verdict");
  bool product_ok = false;
  for (const auto& [k, v] : nl->verdict.facts) product_ok = product_ok || (k == "lipschitz_product" && v == "63/1024");
  o.require(product_ok, "ex-nonlinear product");
  if (o.pass) o.detail = "Singular / Identity / Singular / Smooth 2x/(x+1), 2x/(3-x) / Singular 63/1024";
  return o;
}

// 4. smooth family round trip
Outcome smooth_family() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int cells = 0;
  double worst = 0;
  const auto xs = testing_support::dyadic_points(8);
  for (const Rational& c00 : family_grid()) {
    for (const Rational& c11 : family_grid()) {
      if (!admissible_region(c00, c11).ok) continue;
      ++cells;
      const LFSystemSpec spec = smooth_family_matrices(c00, c11);
      const Verdict v = classify_lf(spec);
      o.require(v.kind == VerdictKind::smooth, "cell (" + to_string(c00) + ", " + to_string(c11) + ") not Smooth");
      const SystemPair pair = lf_pair(spec);
      const double c[2] = {to_double(c00), to_double(c11)};
      for (int i = 0; i < 2; ++i) {
        for (double x : xs) {
          const double err = std::abs(solve_phi(pair, i, x, 1e-10).estimate() - testing_support::smooth_closed_form(c[i], x));
          worst = std::max(worst, err);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst <= 1e-9, "max error " + fmt("%.3g", worst));
  o.require(secs < 60.0, "runtime " + fmt("%.1f s", secs));
  if (o.pass) o.detail = std::to_string(cells) + " admissible cells, max error " + fmt("%.3g", worst) + ", " + fmt("%.2f s", secs);
  return o;
}

// 5. region correctness
Outcome region() {
  Outcome o;
  o.require(admissible_region(q(-1, 2), q(1, 2)).ok, "(-1/2, 1/2)");
  o.require(admissible_region(0, 0).ok, "(0, 0)");
  o.require(!admissible_region(-1, 0).ok, "(-1, 0)");
  for (int n = 0; n < 100;) {
    const Rational c = testing_support::random_rational();
    if (c == -1) continue;
    ++n;
    o.require(involution_c(involution_c(c)) == c, "involution at " + to_string(c));
  }
  for (const Rational& c00 : family_grid()) {
    for (const Rational& c11 : family_grid()) {
      const Rational c11p = involution_c(c11);
      const bool direct = admissible_region(c00, c11).ok;
      o.require(direct == admissible_region_transformed(c00, c11p).ok, "transformed system at " + to_string(c00));
      o.require(admissible_region_transformed(c00, c11p).ok == admissible_region_transformed(c11p, c00).ok,
                "symmetry at " + to_string(c00) + ", " + to_string(c11));
    }
  }
  if (o.pass) o.detail = "examples, 100 involutions, 441 symmetry cells";
  return o;
}

// 6. construction invariants, 1000 random cases each
Outcome invariants() {
  Outcome o;
  const auto pairs = testing_support::all_fixtures();
  auto pick = [&]() -> const SystemPair& { return pairs[static_cast<std::size_t>(uniform() * pairs.size()) % pairs.size()]; };
  auto side = [&](const SystemPair& p) -> const System& { return uniform() < 0.5 ? p.f() : p.g(); };
  auto vertex = [] { return uniform() < 0.5 ? 0 : 1; };

  for (int t = 0; t < 1000; ++t) {  // nesting
    const System& s = side(pick());
    Itinerary it{vertex(), {}};
    const int n = 1 + t % 12;
    for (int k = 0; k < n; ++k) it.digits.push_back(vertex());
    Itinerary l = it, r = it;
    l.digits.push_back(0);
    r.digits.push_back(1);
    const Enclosure P = interval(s, it), L = interval(s, l), R = interval(s, r);
    o.require(P.contains(L) && P.contains(R) && L.lo == P.lo && R.hi == P.hi && std::abs(L.hi - R.lo) <= 1e-15,
              "nesting");
  }
  for (int t = 0; t < 1000; ++t) {  // itinerary consistency
    const System& s = side(pick());
    const int i = vertex(), n = 1 + t % 20;
    const double x = uniform();
    const Itinerary it = itinerary_of(s, i, x, n);
    const Enclosure e = interval(s, it);
    o.require(e.lo <= x + 1e-15 && x <= e.hi + 1e-15, "itinerary consistency");
  }
  for (int t = 0; t < 1000; ++t) {  // curve monotonicity and anchors
    const SystemPair& p = pick();
    const CurveSample c = sample_curve(p, vertex(), t % 11);
    bool mono = true;
    for (std::size_t k = 1; k < c.points.size(); ++k)
      mono = mono && c.points[k - 1].first < c.points[k].first && c.points[k - 1].second <= c.points[k].second;
    o.require(mono, "curve monotonicity");
    o.require(c.points.front() == std::make_pair(0.0, 0.0) && c.points.back() == std::make_pair(1.0, 1.0),
              "curve anchors");
  }
  for (int t = 0; t < 1000; ++t) {  // interval anchors
    const System& s = side(pick());
    const int i = vertex(), n = 1 + t % 40;
    o.require(interval(s, {i, std::vector<int>(n, 0)}).lo == 0.0, "left anchor");
    o.require(interval(s, {i, std::vector<int>(n, 1)}).hi == 1.0, "right anchor");
  }
  for (const auto& p : pairs) {  // delta decrease
    for (const System* s : {&p.f(), &p.g()}) {
      for (int i = 0; i < 2; ++i) {
        std::array<double, 25> d{};
        for (int n = 1; n <= 24; ++n) d[n] = delta(*s, i, n);
        for (int n = 2; n <= 24; ++n) o.require(d[n] <= d[n - 1], "delta monotone " + s->label());
        o.require(d[24] < d[4], "delta(24) < delta(4) " + s->label());
      }
    }
  }
  SolveOptions left, right;  // tie-break independence
  left.snap_endpoints = right.snap_endpoints = false;
  right.tie_break = TieBreak::right;
  for (const auto& p : pairs) {
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 50; ++k) {
        IntervalTracker tr(p.f(), i, false);
        for (int n = 0; n < k % 10; ++n) tr.push(vertex());
        const double x = tr.split();
        const PhiValue a = solve_phi(p, i, x, 1e-10, left), b = solve_phi(p, i, x, 1e-10, right);
        o.require(std::max(a.enclosure.lo, b.enclosure.lo) <= std::min(a.enclosure.hi, b.enclosure.hi) + 1e-15 &&
                      std::abs(a.estimate() - b.estimate()) <= 2e-10,
                  "tie-break at " + fmt("%.17g", x));
      }
    }
  }
  if (o.pass) o.detail = "nesting, itineraries, curves, anchors, delta, tie-break";
  return o;
}

// 7. diagnostics
Outcome diagnostics() {
  Outcome o;
  const SystemPair smooth = fixtures::ex_lf_smooth();
  int close = 0;
  double rs_worst = 0;
  for (int k = 0; k < 100; ++k) {
    const double x = uniform();
    const RatioTrace t50 = ratio_trace(smooth, 0, x, 50);
    if (std::abs(*t50.rows.back().t_n - 0.5) <= 1e-3) ++close;
    const RatioTrace t40 = ratio_trace(smooth, 0, x, 40);
    std::optional<double> last[2];
    for (const auto& r : t40.rows) last[r.digit] = *r.rs_ratio;
    if (last[0]) rs_worst = std::max(rs_worst, std::abs(*last[0] + 0.5));
    if (last[1]) rs_worst = std::max(rs_worst, std::abs(*last[1] - 0.5));
  }
  o.require(close >= 95, "t_n within 1e-3 of 1/2 for " + std::to_string(close) + "/100");
  o.require(rs_worst <= 1e-3, "rs_ratio off by " + fmt("%.3g", rs_worst));
  std::string fractions;
  for (const auto& name : {"ex-affine", "ex-lf-singular", "ex-nonlinear"}) {
    const SystemPair p = *fixtures::by_name(name);
    int above = 0;
    for (int k = 0; k < 1000; ++k)
      if (ratio_trace(p, 0, uniform(), 30).rows.back().ratio > 0.01) ++above;
    const double frac = above / 1000.0;
    fractions += std::string(fractions.empty() ? "" : ", ") + name + " " + fmt("%.3f", frac);
    o.require(frac <= 0.05, "depth-30 ratio > 0.01 fraction: ");
  }
  if (!o.pass && o.detail.rfind("depth-30", 0) == 0) o.detail += fractions;
  if (o.pass) o.detail = "t_n " + std::to_string(close) + "/100, rs_ratio error " + fmt("%.2g", rs_worst) + ", " + fractions;
  return o;
}

// 8. graph-operator fixed point
Outcome graph_operator() {
  Outcome o;
  double worst_ratio = 0;
  for (const auto& name : fixtures::names()) {
    const SystemPair p = *fixtures::by_name(name);
    const GraphOperatorDiscrepancy d = graph_operator_check(p, 10);
    for (int i = 0; i < 2; ++i) {
      const double bound = 2 * delta(p.f(), i, 10);
      worst_ratio = std::max(worst_ratio, d.per_vertex[i] / bound);
      o.require(d.per_vertex[i] <= bound, name + " vertex " + std::to_string(i));
    }
  }
  if (o.pass) o.detail = "worst discrepancy / bound " + fmt("%.3g", worst_ratio);
  return o;
}

// 9. parser
Outcome parser() {
  Outcome o;
  const auto corpus = testing_support::read_lines("tests/data/expr_corpus.txt");
  o.require(corpus.size() == 50, "corpus size " + std::to_string(corpus.size()));
  for (const auto& src : corpus) {
    try {
      const ExprPtr a = parse_expression(src);
      const std::string printed = to_string(*a);
      const ExprPtr b = parse_expression(printed);
      bool same = to_string(*b) == printed;
      for (int k = 0; k < 100; ++k) same = same && evaluate(*a, k / 99.0) == evaluate(*b, k / 99.0);
      o.require(same, "round trip of " + src);
    } catch (const std::exception& e) {
      o.require(false, src + ": " + e.what());
    }
  }
  const auto goldens = testing_support::nonlinear_goldens();
  o.require(!goldens.empty(), "no goldens");
  for (const auto& g : goldens) {
    const auto v = evaluate_exact(*parse_expression(g.formula), g.x);
    o.require(v && *v == g.value, g.formula + " at " + to_string(g.x));
  }
  if (o.pass) o.detail = "50 round trips, " + std::to_string(goldens.size()) + " exact goldens";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed-form oracle", closed_form_oracle},
      {"functional-equation residual", residuals},
      {"theorem dispatch", dispatch},
      {"smooth-family round trip", smooth_family},
      {"region correctness", region},
      {"construction invariants", invariants},
      {"diagnostics", diagnostics},
      {"graph-operator fixed point", graph_operator},
      {"parser", parser},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
