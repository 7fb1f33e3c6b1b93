#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "striplab/geometry.hpp"
#include "support/oracles.hpp"

using namespace striplab;
using std::numbers::pi;

namespace {

CompactSet sample_arc() { return CompactSet::arc({0.75, 0.0}, 0.1, 0.0, 1.5 * pi); }

std::vector<CompactSet> zoo() {
  return {
      CompactSet::segment({0.6, 0.0}, {0.9, 0.1}),
      sample_arc(),
      CompactSet::polyline({{0.6, 0.0}, {0.7, 0.1}, {0.8, 0.0}, {0.9, 0.1}}),
      CompactSet::point_set({{0.7, 0.0}, {0.8, 0.05}, {0.75, -0.02}}),
      CompactSet::cantor_product(fat_cantor(3), 0.0, 0.5, 0.2, {0.6, 0.0}),
      CompactSet::cantor_product(fat_cantor(2), 0.0, 0.5, 0.2, {0.6, 0.0}, FiberMode::edges),
  };
}

}  // namespace

TEST(Construction, RejectsDegenerateShapes) {
  EXPECT_THROW(CompactSet::segment({1, 1}, {1, 1}), InvalidSpec);
  EXPECT_THROW(CompactSet::arc({0, 0}, 0.0, 0.0, 1.0), InvalidSpec);
  EXPECT_THROW(CompactSet::arc({0, 0}, 1.0, 1.0, 1.0), InvalidSpec);
  EXPECT_THROW(CompactSet::arc({0, 0}, 1.0, 0.0, 2.0 * pi), InvalidSpec);
  EXPECT_THROW(CompactSet::polyline({{0, 0}}), InvalidSpec);
  EXPECT_THROW(CompactSet::polyline({{0, 0}, {1, 0}, {1, 0}}), InvalidSpec);
  EXPECT_THROW(CompactSet::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 0}}), InvalidSpec);
  EXPECT_THROW(CompactSet::polyline({{0, 0}, {1, 0}, {0.5, 0}}), InvalidSpec);
  EXPECT_THROW(CompactSet::polyline({{0, 0}, {2, 0}, {2, 1}, {1, -1}}), InvalidSpec);
  EXPECT_THROW(CompactSet::point_set({}), InvalidSpec);
  EXPECT_THROW(CompactSet::cantor_product({{0.5, 1.0}, {0.0, 0.25}}, 0, 1), InvalidSpec);
  EXPECT_THROW(CompactSet::cantor_product({{0.0, 0.5}, {0.5, 1.0}}, 0, 1), InvalidSpec);
  EXPECT_THROW(CompactSet::cantor_product(fat_cantor(1), 1, 0), InvalidSpec);
  EXPECT_THROW(CompactSet::segment({NAN, 0}, {1, 0}), InvalidSpec);
}

TEST(Construction, KindsAndInterior) {
  const auto sets = zoo();
  EXPECT_EQ(sets[0].kind(), "segment");
  EXPECT_EQ(sets[1].kind(), "arc");
  EXPECT_EQ(sets[2].kind(), "polyline");
  EXPECT_EQ(sets[3].kind(), "points");
  EXPECT_EQ(sets[4].kind(), "cantor_product");
  for (std::size_t i = 0; i < 4; ++i) EXPECT_TRUE(sets[i].has_empty_interior());
  EXPECT_FALSE(sets[4].has_empty_interior());
  EXPECT_TRUE(sets[5].has_empty_interior());
  EXPECT_TRUE(CompactSet::cantor_product(fat_cantor(2), 0.3, 0.3).has_empty_interior());
}

TEST(Distance, ClosedFormExamples) {
  const auto seg = CompactSet::segment({0, 0}, {1, 0});
  EXPECT_DOUBLE_EQ(distance(seg, {0.5, 0.3}), 0.3);
  EXPECT_DOUBLE_EQ(distance(seg, {2.0, 0.0}), 1.0);
  EXPECT_EQ(distance(seg, {0.25, 0.0}), 0.0);

  const auto arc = sample_arc();
  EXPECT_NEAR(distance(arc, {0.75, 0.0}), 0.1, 1e-15);
  EXPECT_NEAR(distance(arc, {0.95, 0.0}), 0.1, 1e-15);
  // Below-right of the centre lies in the missing quarter: nearest is an endpoint.
  const cplx probe = cplx(0.75, 0.0) + std::polar(0.1, -pi / 4.0);
  EXPECT_NEAR(distance(arc, probe), std::abs(probe - cplx(0.85, 0.0)), 1e-15);

  const auto cantor = CompactSet::cantor_product(fat_cantor(1), 0.0, 1.0);
  EXPECT_EQ(distance(cantor, {0.2, 0.5}), 0.0);
  EXPECT_NEAR(distance(cantor, {0.5, 0.5}), 0.125, 1e-15);
  EXPECT_NEAR(distance(cantor, {0.2, 1.5}), 0.5, 1e-15);
  const auto edges = CompactSet::cantor_product(fat_cantor(1), 0.0, 1.0, 1.0, {}, FiberMode::edges);
  EXPECT_NEAR(distance(edges, {0.2, 0.5}), 0.175, 1e-15);
}

TEST(Distance, MatchesDenseSamplingOracle) {
  std::mt19937_64 rng(20260101);
  const auto arc_pts = oracle::dense_arc({0.75, 0.0}, 0.1, 0.0, 1.5 * pi, 200000);
  const auto seg_pts = oracle::dense_segment({0.6, 0.0}, {0.9, 0.1}, 200000);
  const auto arc = sample_arc();
  const auto seg = CompactSet::segment({0.6, 0.0}, {0.9, 0.1});
  for (int i = 0; i < 200; ++i) {
    const cplx z = oracle::random_cplx(rng, 0.5, 1.0) - cplx(0.0, 0.25);
    EXPECT_NEAR(distance(arc, z), oracle::min_distance(arc_pts, z), 1e-5);
    EXPECT_NEAR(distance(seg, z), oracle::min_distance(seg_pts, z), 1e-5);
  }
}

TEST(Distance, ZeroOnSamplesOfK) {
  for (const auto& set : zoo()) {
    const auto grid = discretize(set, 0.01);
    for (const cplx& p : grid.points) EXPECT_LE(distance(set, p), 1e-14) << set.kind();
  }
}

TEST(BoundingRadius, DominatesSamplesAndIsAttained) {
  for (const auto& set : zoo()) {
    const cplx c(0.7, 0.05);
    const double R = bounding_radius(set, c);
    const auto grid = discretize(set, 1e-4);
    double worst = 0.0;
    for (const cplx& p : grid.points) worst = std::max(worst, std::abs(p - c));
    EXPECT_LE(worst, R * (1.0 + 1e-14)) << set.kind();
    EXPECT_GE(worst, R - 2e-4) << set.kind();
  }
}

TEST(Discretize, CoveringRadiusHolds) {
  std::mt19937_64 rng(7);
  for (const auto& set : zoo()) {
    for (double h : {0.05, 0.01, 0.003}) {
      const auto grid = discretize(set, h);
      EXPECT_LE(grid.covering_radius, h * (1.0 + 1e-12)) << set.kind();
      // Every point of K sampled densely lies within the reported radius of a sample.
      const auto fine = discretize(set, h / 17.0);
      for (int k = 0; k < 300; ++k) {
        const cplx p = fine.points[rng() % fine.size()];
        EXPECT_LE(oracle::min_distance(grid.points, p), grid.covering_radius * (1.0 + 1e-9) + 1e-15) << set.kind();
      }
    }
  }
}

TEST(Discretize, SegmentExample) {
  const auto grid = discretize(CompactSet::segment({0, 0}, {1, 0}), 0.1);
  ASSERT_EQ(grid.size(), 6u);
  EXPECT_DOUBLE_EQ(grid.covering_radius, 0.1);
  EXPECT_EQ(grid.points.front(), cplx(0, 0));
  EXPECT_EQ(grid.points.back(), cplx(1, 0));
}

TEST(Discretize, CapIsEnforced) {
  const auto seg = CompactSet::segment({0, 0}, {1, 0});
  try {
    discretize(seg, 1e-6, 1000);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.sample_cap, 1000u);
    EXPECT_GT(e.required_samples, 1000u);
  }
  EXPECT_THROW(discretize(seg, 0.0), InvalidArgument);
}

TEST(NearestExterior, WithinDeltaAndOutside) {
  std::mt19937_64 rng(11);
  for (const auto& set : zoo()) {
    if (!set.has_empty_interior()) continue;
    const auto grid = discretize(set, 0.01);
    for (double delta : {1e-2, 1e-5, 1e-9}) {
      for (int k = 0; k < 40; ++k) {
        const cplx z = grid.points[rng() % grid.size()];
        const cplx w = nearest_exterior(set, z, delta);
        EXPECT_LE(std::abs(w - z), delta * (1.0 + 1e-9) + 4e-16 * std::abs(z)) << set.kind();
        EXPECT_GE(distance(set, w), delta * 1e-6) << set.kind();
      }
    }
  }
}

TEST(NearestExterior, PassesThroughFarPoints) {
  const auto seg = CompactSet::segment({0, 0}, {1, 0});
  EXPECT_EQ(nearest_exterior(seg, {0.5, 1.0}, 1e-3), cplx(0.5, 1.0));
  // Barely off K: pushed further out rather than returned as is.
  EXPECT_GT(distance(seg, nearest_exterior(seg, {0.5, 1e-12}, 1e-3)), 9e-4);
  EXPECT_THROW(nearest_exterior(seg, {0.5, 0.0}, 0.0), InvalidArgument);
}

TEST(NearestExterior, DeltaNearRoundingScale) {
  // Probes z + delta e^(i phi) round at the ulp of z; they must still count.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> logd(-12.0, -9.0);
  const auto K = CompactSet::arc(cplx(0.635, -0.018), 0.11, 5.9, 8.5);
  const auto grid = discretize(K, 0.01);
  for (int k = 0; k < 200; ++k) {
    const cplx z = grid.points[rng() % grid.size()];
    const double delta = std::pow(10.0, logd(rng));
    const cplx w = nearest_exterior(K, z, delta);
    EXPECT_GE(distance(K, w), 2.0 * distance_floor(K, w) * (1.0 - 1e-9)) << k;
    EXPECT_GE(distance(K, w), 0.4 * delta) << k;
    EXPECT_LE(std::abs(w - z), delta + 1e-15) << k;
  }
}

TEST(NearestExterior, RefusesBelowRoundingFloor) {
  const auto K = CompactSet::segment(0.6, 0.9);
  EXPECT_THROW(nearest_exterior(K, 0.75, 1e-17), ResolutionExhausted);
}

TEST(NearestExterior, SolidRectangleExitsWhenReachable) {
  const auto solid = CompactSet::cantor_product(fat_cantor(2), 0.0, 1.0);
  // Near the right edge of the first interval the gap is reachable.
  const auto first = fat_cantor(2).front();
  const cplx z(first.hi - 1e-4, 0.5);
  const cplx w = nearest_exterior(solid, z, 1e-3);
  EXPECT_GT(distance(solid, w), 0.0);
  // Deep inside a rectangle no exterior point is within delta.
  EXPECT_THROW(nearest_exterior(solid, {first.lo + first.length() / 2.0, 0.5}, 1e-3), ResolutionExhausted);
}

TEST(FatCantor, SmallDepths) {
  const auto d0 = fat_cantor(0);
  ASSERT_EQ(d0.size(), 1u);
  EXPECT_EQ(d0[0].lo, 0.0);
  EXPECT_EQ(d0[0].hi, 1.0);
  const auto d1 = fat_cantor(1);
  ASSERT_EQ(d1.size(), 2u);
  EXPECT_DOUBLE_EQ(d1[0].hi, 0.375);
  EXPECT_DOUBLE_EQ(d1[1].lo, 0.625);
  EXPECT_NEAR(total_length(fat_cantor(3)), 0.5625, 1e-15);
  EXPECT_THROW(fat_cantor(-1), InvalidArgument);
  EXPECT_THROW(fat_cantor(31), InvalidArgument);
  EXPECT_THROW(fat_cantor(30), BudgetExceeded);
}

TEST(FatCantor, LengthSortedDisjoint) {
  for (int d = 0; d <= 20; ++d) {
    const auto iv = fat_cantor(d);
    ASSERT_EQ(iv.size(), std::size_t{1} << d);
    EXPECT_NEAR(total_length(iv), oracle::fat_cantor_length(d), 1e-12) << d;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      EXPECT_LE(iv[i].lo, iv[i].hi);
      if (i > 0) ASSERT_LT(iv[i - 1].hi, iv[i].lo);
    }
    EXPECT_EQ(iv.front().lo, 0.0);
    EXPECT_EQ(iv.back().hi, 1.0);
  }
}
