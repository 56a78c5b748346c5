#include "gmt/heisenberg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gmt;

namespace {

HPoint hp(double x, double y, double t) {
  HPoint p = HPoint::identity(1);
  p.z << x, y;
  p.t = t;
  return p;
}

HPoint random_point(std::mt19937_64& rng, int n = 1) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  HPoint p = HPoint::identity(n);
  for (Index i = 0; i < p.z.size(); ++i) p.z[i] = u(rng);
  p.t = u(rng);
  return p;
}

double gap(const HPoint& a, const HPoint& b) { return (a.to_vector() - b.to_vector()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(HeisenbergGroup, LawExamples) {
  EXPECT_LE(gap(h_group(hp(1, 0, 0), hp(0, 1, 0)), hp(1, 1, -2)), 0.0);
  EXPECT_LE(gap(h_group(hp(0, 1, 0), hp(1, 0, 0)), hp(1, 1, 2)), 0.0);
  EXPECT_LE(gap(h_inverse(hp(1, 2, 3)), hp(-1, -2, -3)), 0.0);
  EXPECT_LE(gap(h_dilate(hp(1, 2, 3), 2), hp(2, 4, 12)), 0.0);
}

TEST(HeisenbergGroup, CounterClockwiseSquareLiftsToMinusFourTimesArea) {
  const double a = 0.3;
  MatrixXd controls(2, 4);
  controls << 4 * a, 0, -4 * a, 0,  //
      0, 4 * a, 0, -4 * a;
  const HorizontalPathH path = integrate_h(HPoint::identity(1), controls);
  EXPECT_LE(gap(path.positions.back(), hp(0, 0, -4 * a * a)), 1e-14);
  EXPECT_NEAR(path.length(), 4 * a, 1e-14);
}

TEST(HeisenbergGroup, AxiomsOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 2000; ++trial) {
      const HPoint p = random_point(rng, n), q = random_point(rng, n), r = random_point(rng, n);
      EXPECT_LE(gap(h_group(h_group(p, q), r), h_group(p, h_group(q, r))), 1e-12);
      EXPECT_LE(gap(h_group(p, h_inverse(p)), HPoint::identity(n)), 1e-12);
      EXPECT_LE(gap(h_group(HPoint::identity(n), p), p), 0.0);
      const double s = 0.1 + trial % 7;
      EXPECT_LE(gap(h_dilate(h_group(p, q), s), h_group(h_dilate(p, s), h_dilate(q, s))), 1e-10 * s * s);
    }
  }
}

TEST(KoranyiGauge, Examples) {
  EXPECT_DOUBLE_EQ(koranyi_gauge(hp(1, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(koranyi_gauge(hp(0, 0, 1)), 1.0);
  EXPECT_NEAR(koranyi_gauge(hp(1, 0, std::sqrt(15.0))), 2.0, 1e-15);
  EXPECT_EQ(koranyi_gauge(HPoint::identity(2)), 0.0);
  EXPECT_NEAR(koranyi_distance(hp(0, 0, 0), hp(0, 0, 16)), 4.0, 1e-15);
}

TEST(KoranyiGauge, HomogeneityAndInvariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const HPoint p = random_point(rng), q = random_point(rng), g = random_point(rng);
    const double r = 0.01 + 0.1 * (trial % 50);
    EXPECT_NEAR(koranyi_gauge(h_dilate(p, r)), r * koranyi_gauge(p), 1e-12 * (1 + r));
    EXPECT_NEAR(koranyi_distance(h_group(g, p), h_group(g, q)), koranyi_distance(p, q), 1e-10);
    EXPECT_NEAR(koranyi_distance(p, q), koranyi_distance(q, p), 1e-12);
  }
}

TEST(KoranyiGauge, MetricAxioms) {
  const auto sampler = [](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_point(rng, 1).to_vector();
  };
  const TriangleCheck check = check_metric_axioms(koranyi_metric(), sampler, 10000, 1e-12);
  EXPECT_EQ(check.triples, 10000u);
  EXPECT_EQ(check.violations, 0u);
  EXPECT_LE(check.max_asymmetry, 1e-12);
  EXPECT_EQ(check.max_self_distance, 0.0);
}

TEST(CcDistance, HorizontalSegmentHasUnitLength) {
  const CcBounds b = cc_distance_h(HPoint::identity(1), hp(1, 0, 0));
  EXPECT_NEAR(b.upper, 1.0, 0.02);
  EXPECT_LE(b.lower, b.upper);
  EXPECT_LE(gap(b.path.positions.back(), hp(1, 0, 0)), 1e-6);
}

TEST(CcDistance, VerticalClosedForm) {
  for (double tau : {0.25, 1.0, 4.0}) {
    const CcBounds b = cc_distance_h(HPoint::identity(1), hp(0, 0, tau));
    const double exact = std::sqrt(std::numbers::pi * tau);
    EXPECT_NEAR(b.upper, exact, 0.02 * exact) << "tau=" << tau;
    EXPECT_GE(b.upper, exact * (1 - 1e-6));
    EXPECT_LE(b.lower, exact);
    EXPECT_NEAR(b.path.length(), b.upper, 1e-9);
  }
}

TEST(CcDistance, LeftInvariantAndDilationScaled) {
  const HPoint g = hp(0.4, -0.7, 1.3);
  const HPoint p = hp(0.2, 0.1, 0.3);
  const double base = cc_distance_h(HPoint::identity(1), p).upper;
  EXPECT_NEAR(cc_distance_h(g, h_group(g, p)).upper, base, 0.01 * base);
  EXPECT_NEAR(cc_distance_h(HPoint::identity(1), h_dilate(p, 3)).upper, 3 * base, 0.03 * base);
}

TEST(CcDistance, BilipschitzConstantBracketsRatios) {
  const BilipschitzConstant& c = bilipschitz_constant(1);
  EXPECT_GT(c.samples, 0u);
  EXPECT_GE(c.value, 1.0);
  EXPECT_LE(c.min_ratio, c.max_ratio);
  EXPECT_GE(c.value, c.max_ratio);
  EXPECT_GE(c.value * c.min_ratio, 1.0 - 1e-12);
  // d_cc(0,(0,0,1)) / d_K = sqrt(pi).
  EXPECT_GE(c.max_ratio, std::sqrt(std::numbers::pi) * 0.99);
  EXPECT_EQ(&bilipschitz_constant(1), &c);
}

TEST(LipschitzProfile, HorizontalLineIsFlatAndVerticalBlowsUp) {
  const double h = 1.0 / 256;
  const auto grid = grid_box(GridIndex::Zero(1), GridIndex::Constant(1, 256));
  const SampledMap line = SampledMap::sample(
      1, h, grid, [](const VectorXd& x) { return hp(x[0], 0, 0).to_vector(); }, koranyi_metric());
  const auto flat = h_lipschitz_profile(line, 5);
  ASSERT_EQ(flat.size(), 5u);
  for (const auto& row : flat) EXPECT_NEAR(row.max_ratio, 1.0, 1e-9);
  EXPECT_NEAR(profile_slope(flat), 0.0, 1e-9);

  const SampledMap vertical = SampledMap::sample(
      1, h, grid, [](const VectorXd& x) { return hp(0, 0, x[0]).to_vector(); }, koranyi_metric());
  EXPECT_NEAR(profile_slope(h_lipschitz_profile(vertical, 5)), -0.5, 1e-9);
}

TEST(LowRank, HelixHasRankOne) {
  const double h = 0.01;
  const auto grid = grid_box(GridIndex::Zero(2), GridIndex::Constant(2, 40));
  const SampledMap helix = SampledMap::sample(
      2, h, grid,
      [](const VectorXd& x) {
        const double a = std::numbers::pi * x[0];
        return hp(std::cos(a), std::sin(a), -2 * a).to_vector();
      },
      koranyi_metric());
  JetOptions o;
  o.rank_tol = 1e-4;
  const LowRankReport r = low_rank_check(helix, o);
  EXPECT_EQ(r.max_rank, 1);
  EXPECT_EQ(r.resolved + r.unresolved, helix.size());
  EXPECT_EQ(r.rank_counts[1], r.resolved);
}
