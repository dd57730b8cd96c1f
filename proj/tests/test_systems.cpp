#include "support.hpp"

#include <gtest/gtest.h>

using namespace gdconj;
using fixtures::q;

namespace {

std::vector<System> all_systems() {
  std::vector<System> out;
  for (const auto& p : testing_support::all_fixtures()) {
    out.push_back(p.f());
    out.push_back(p.g());
  }
  return out;
}

Itinerary random_itinerary(int start, int depth) {
  Itinerary it{start, {}};
  for (int k = 0; k < depth; ++k) it.digits.push_back(testing_support::uniform() < 0.5 ? 0 : 1);
  return it;
}

}  // namespace

TEST(Systems, CompatibilityExamples) {
  EXPECT_TRUE(validate_compatibility(dyadic_system().maps()).ok);
  EXPECT_TRUE(affine_system(q(1, 2), q(1, 3)).valid());
  MapGrid broken = dyadic_system().maps();
  broken[0][1] = Map::affine(q(2, 3), q(1, 3));
  const CompatibilityReport r = validate_compatibility(broken);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.violations.empty());
  EXPECT_THROW(System(broken).require_valid(), std::invalid_argument);
}

TEST(Systems, CompatibilityForExpressionMaps) {
  EXPECT_TRUE(fixtures::ex_nonlinear().g().valid());
  MapGrid grid = dyadic_system().maps();
  grid[0][0] = Map::expr("x^2/3");  // h_{0,0}(1) = 1/3 but h_{0,1}(0) = 1/2
  EXPECT_FALSE(validate_compatibility(grid).ok);
  grid[0][0] = Map::expr("x^2/2");
  EXPECT_TRUE(validate_compatibility(grid).ok);
}

TEST(Systems, IntervalExamples) {
  const System d = dyadic_system();
  const Enclosure a = interval(d, {0, {0}});
  EXPECT_EQ(a.lo, 0.0);
  EXPECT_EQ(a.hi, 0.5);
  const Enclosure b = interval(d, {0, {1, 0}});
  EXPECT_EQ(b.lo, 0.5);
  EXPECT_EQ(b.hi, 0.75);
  const auto [lo, hi] = interval_exact(fixtures::ex_lf_smooth().g(), {0, {0}});
  EXPECT_EQ(lo, Rational(0));
  EXPECT_EQ(hi, q(2, 3));
  EXPECT_THROW(interval(d, {0, {}}), std::invalid_argument);
  EXPECT_THROW(interval(d, {2, {0}}), std::invalid_argument);
  EXPECT_THROW(interval(d, {0, {0, 2}}), std::invalid_argument);
}

TEST(Systems, ItineraryExamples) {
  const System d = dyadic_system();
  EXPECT_EQ(itinerary_of(d, 0, 0.3, 3).digits, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(itinerary_of(d, 0, 0.5, 3).digits, (std::vector<int>{0, 1, 1}));
  for (int n : {1, 7, 30}) EXPECT_EQ(itinerary_of(d, 0, 1.0, n).digits, std::vector<int>(n, 1));
  EXPECT_EQ(itinerary_of(d, 1, 0.0, 5).digits, std::vector<int>(5, 0));
}

TEST(Systems, DeltaExamples) {
  const System d = dyadic_system();
  EXPECT_EQ(delta_exact(d, 0, 5), q(1, 32));
  EXPECT_DOUBLE_EQ(delta(d, 0, 5), 1.0 / 32.0);
  const System f = fixtures::ex_affine().f();
  EXPECT_EQ(delta_exact(f, 0, 2), q(1, 3));
  for (const System& s : all_systems()) {
    for (int i = 0; i < 2; ++i) {
      const double d1 = delta(s, i, 1);
      const double expected = std::max(s.map(i, 0).apply(1.0), 1.0 - s.map(i, 1).apply(0.0));
      EXPECT_DOUBLE_EQ(d1, expected);
      EXPECT_LT(d1, 1.0);
    }
  }
  EXPECT_THROW(delta(d, 0, 25), std::invalid_argument);
  EXPECT_THROW(delta(d, 0, 0), std::invalid_argument);
}

TEST(Systems, DeltaMatchesBruteForce) {
  for (const System& s : all_systems()) {
    for (int i = 0; i < 2; ++i) {
      for (int n = 1; n <= 6; ++n) {
        double best = 0;
        for (int mask = 0; mask < (1 << n); ++mask) {
          Itinerary it{i, {}};
          for (int k = 0; k < n; ++k) it.digits.push_back((mask >> k) & 1);
          best = std::max(best, interval(s, it).width());
        }
        EXPECT_NEAR(delta(s, i, n), best, 1e-15) << s.label() << " i=" << i << " n=" << n;
      }
    }
  }
}

TEST(Systems, DeltaMonotoneDecrease) {
  for (const System& s : all_systems()) {
    for (int i = 0; i < 2; ++i) {
      double prev = 1;
      for (int n = 1; n <= 24; ++n) {
        const double d = delta(s, i, n);
        EXPECT_LE(d, prev) << s.label() << " n=" << n;
        prev = d;
      }
      EXPECT_LT(delta(s, i, 24), delta(s, i, 4));
    }
  }
}

TEST(Systems, NestingAndPartition) {
  for (const System& s : all_systems()) {
    for (int t = 0; t < 1000; ++t) {
      const int start = t % 2;
      const Itinerary parent = random_itinerary(start, 1 + t % 12);
      Itinerary left = parent, right = parent;
      left.digits.push_back(0);
      right.digits.push_back(1);
      const Enclosure P = interval(s, parent), L = interval(s, left), R = interval(s, right);
      ASSERT_TRUE(P.contains(L) && P.contains(R)) << s.label();
      EXPECT_EQ(L.lo, P.lo);
      EXPECT_EQ(R.hi, P.hi);
      EXPECT_NEAR(L.hi, R.lo, 1e-15);
    }
  }
}

TEST(Systems, TrackerMatchesInterval) {
  for (const System& s : all_systems()) {
    for (int t = 0; t < 200; ++t) {
      const Itinerary it = random_itinerary(t % 2, 1 + t % 16);
      for (bool exact : {true, false}) {
        IntervalTracker tr(s, it.start, exact);
        for (int d : it.digits) tr.push(d);
        const Enclosure e = interval(s, it);
        EXPECT_NEAR(tr.lo(), e.lo, 1e-14);
        EXPECT_NEAR(tr.hi(), e.hi, 1e-14);
      }
    }
  }
}

TEST(Systems, ItineraryConsistency) {
  for (const System& s : all_systems()) {
    for (int t = 0; t < 1000; ++t) {
      const int start = t % 2;
      const double x = testing_support::uniform();
      const int n = 1 + t % 20;
      const Itinerary it = itinerary_of(s, start, x, n);
      ASSERT_EQ(static_cast<int>(it.digits.size()), n);
      for (int k = 1; k <= n; ++k) {
        Itinerary prefix{start, {it.digits.begin(), it.digits.begin() + k}};
        const Enclosure e = interval(s, prefix);
        ASSERT_TRUE(e.lo <= x + 1e-15 && x <= e.hi + 1e-15) << s.label() << " x=" << x << " k=" << k;
      }
    }
  }
}

TEST(Systems, EndpointAnchors) {
  for (const System& s : all_systems()) {
    for (int i = 0; i < 2; ++i) {
      for (int n = 1; n <= 30; ++n) {
        EXPECT_EQ(interval(s, {i, std::vector<int>(n, 0)}).lo, 0.0);
        EXPECT_EQ(interval(s, {i, std::vector<int>(n, 1)}).hi, 1.0);
      }
    }
  }
}

TEST(Systems, BreakpointsSortedAndComplete) {
  for (const System& s : all_systems()) {
    const auto bp = breakpoints(s, 6);
    for (int v = 0; v < 2; ++v) {
      ASSERT_EQ(bp[v].size(), 65u);
      EXPECT_EQ(bp[v].front(), 0.0);
      EXPECT_EQ(bp[v].back(), 1.0);
      for (std::size_t k = 1; k < bp[v].size(); ++k) EXPECT_LT(bp[v][k - 1], bp[v][k]);
    }
  }
}

TEST(Systems, DyadicDetectionIsProjective) {
  MapGrid grid = dyadic_system().maps();
  grid[0][0] = Map::lf({2, 0, 0, 4});
  EXPECT_TRUE(is_dyadic(System(grid)));
  EXPECT_FALSE(is_dyadic(fixtures::ex_affine().f()));
}
