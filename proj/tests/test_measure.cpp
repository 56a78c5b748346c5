#include "gmt/measure.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gmt;

namespace {

VectorXd v(std::initializer_list<double> xs) {
  VectorXd out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

std::vector<VectorXd> unit_segment_samples(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<VectorXd> pts;
  for (int i = 0; i < n; ++i) pts.push_back(v({u(rng), 0.0}));
  return pts;
}

}  // namespace

TEST(HausdorffContent, SinglePoint) {
  const ContentEstimate e = hausdorff_content({v({1, 2})}, euclidean_metric(), 1.5, 0.1);
  EXPECT_EQ(e.ball_count, 1u);
  EXPECT_NEAR(e.value, std::pow(0.1, 1.5), 1e-15);
}

TEST(HausdorffContent, UnitSegmentDimensionOne) {
  const auto pts = unit_segment_samples(1000, 3);
  double previous = std::numeric_limits<double>::infinity();
  for (double r : {0.1, 0.05, 0.025}) {
    const ContentEstimate e = hausdorff_content(pts, euclidean_metric(), 1.0, r);
    EXPECT_GE(e.value, 0.5);
    EXPECT_LE(e.value, 1.5);
    // A ball of radius r covers at most 2r of the segment.
    EXPECT_GE(static_cast<double>(e.ball_count), 0.99 / (2 * r));
    EXPECT_NEAR(e.value, static_cast<double>(e.ball_count) * r, 1e-12);
    EXPECT_LE(e.value, previous);
    previous = e.value;
  }
}

TEST(HausdorffContent, UnitSegmentDimensionTwoDecays) {
  const auto pts = unit_segment_samples(1000, 4);
  const auto series = content_series(pts, euclidean_metric(), 2.0, {0.1, 0.05, 0.025, 0.0125});
  EXPECT_NEAR(content_slope(series), 1.0, 0.2);
}

TEST(HausdorffContent, Monotonicity) {
  const auto pts = unit_segment_samples(300, 5);
  std::size_t previous_count = std::numeric_limits<std::size_t>::max();
  for (double r : {0.01, 0.02, 0.05, 0.1, 0.3}) {
    const ContentEstimate a = hausdorff_content(pts, euclidean_metric(), 0.5, r);
    const ContentEstimate b = hausdorff_content(pts, euclidean_metric(), 1.5, r);
    EXPECT_GE(a.value, b.value);
    EXPECT_LE(a.ball_count, previous_count);
    previous_count = a.ball_count;
  }
}

TEST(HausdorffContent, NonPositiveRadiusRejected) {
  EXPECT_THROW(hausdorff_content({v({0})}, euclidean_metric(), 1.0, 0.0), Error);
}

TEST(Vitali, Examples) {
  const Cube a{v({0.5, 0.5}), 1.0};
  EXPECT_EQ(vitali_select({a}), (std::vector<std::size_t>{0}));
  const Cube far{v({5.5, 5.5}), 1.0};
  EXPECT_EQ(vitali_select({a, far}).size(), 2u);
  const Cube q2{v({0.95, 0.95}), 0.9};  // [0.5, 1.4]^2
  const auto kept = vitali_select({a, q2});
  ASSERT_EQ(kept, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(a.dilated(5).contains(q2));
  EXPECT_TRUE(vitali_select({}).empty());
}

TEST(Vitali, RandomFamilies) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + trial % 3;
    std::vector<Cube> cubes;
    const int count = 1 + static_cast<int>(u(rng) * 20);
    for (int i = 0; i < count; ++i) {
      VectorXd c(k);
      for (int a = 0; a < k; ++a) c[a] = u(rng);
      cubes.push_back({c, 0.02 + 0.3 * u(rng)});
    }
    const auto kept = vitali_select(cubes);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) EXPECT_FALSE(cubes[kept[i]].intersects(cubes[kept[j]]));
    }
    for (const Cube& c : cubes) {
      bool met = false, covered = false;
      for (std::size_t i : kept) {
        if (cubes[i].intersects(c) && cubes[i].edge >= c.edge) met = true;
        if (cubes[i].dilated(5).contains(c)) covered = true;
      }
      EXPECT_TRUE(met);
      EXPECT_TRUE(covered);
    }
  }
}

TEST(Riesz, EmptySetIsZero) {
  const GridSet empty(2, 0.1, VectorXd::Zero(2), {});
  EXPECT_EQ(riesz_potential(empty, v({0.3, 0.3})).value, 0.0);
}

TEST(Riesz, UnitDiskAroundCenter) {
  // Polar coordinates: int_0^1 (1/t) 2 pi t dt = 2 pi.
  const double h = 0.005;
  const GridSet square = GridSet::box(v({-1, -1}), v({1, 1}), h);
  std::vector<GridIndex> disk;
  for (std::size_t i = 0; i < square.size(); ++i) {
    if (square.center(i).norm() <= 1) disk.push_back(square.indices()[i]);
  }
  const GridSet set(2, h, square.origin(), disk);
  const RieszResult r = riesz_potential(set, v({0.0, 0.0}));
  EXPECT_NEAR(r.value, 2 * std::numbers::pi, 0.005 * 2 * std::numbers::pi);
}

TEST(Riesz, OneDimensionalKernelIsOne) {
  const GridSet unit = GridSet::box(v({0}), v({1}), 0.01);
  EXPECT_NEAR(riesz_potential(unit, v({0})).value, 1.0, 1e-12);
  EXPECT_NEAR(riesz_ball_constant(2), 2 * std::sqrt(std::numbers::pi), 1e-12);
}

TEST(Riesz, SelfCellIsRegularized) {
  const GridSet unit = GridSet::box(v({0, 0}), v({1, 1}), 0.1);
  const RieszResult r = riesz_potential(unit, v({0.55, 0.55}));
  EXPECT_TRUE(r.regularized);
  EXPECT_TRUE(std::isfinite(r.value));
}

TEST(Riesz, BallIsExtremalOnRandomSets) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> cell(0, 49);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<GridIndex> idx;
    const int n = 10 + trial * 2;
    for (int i = 0; i < n; ++i) idx.push_back((GridIndex(2) << cell(rng), cell(rng)).finished());
    std::sort(idx.begin(), idx.end(), [](const GridIndex& a, const GridIndex& b) {
      return std::make_pair(a[0], a[1]) < std::make_pair(b[0], b[1]);
    });
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    const GridSet set(2, 0.02, VectorXd::Constant(2, 0.01), idx);
    const VectorXd x = v({u(rng), u(rng)});
    EXPECT_LE(riesz_potential(set, x).value, riesz_ball_constant(2) * std::sqrt(set.measure()) * 1.02);
  }
}

TEST(Poincare, ConstantFunction) {
  const GridSet d = GridSet::box(v({0, 0}), v({1, 1}), 0.05);
  const PoincareResult p = poincare_deviation(d, [](const VectorXd&) { return 3.0; }, v({0.2, 0.7}));
  EXPECT_NEAR(p.lhs, 0.0, 1e-12);
  EXPECT_NEAR(p.rhs, 0.0, 1e-12);
}

TEST(Poincare, OneDimensionalRamp) {
  const GridSet d = GridSet::box(v({0}), v({1}), 0.01);
  const PoincareResult p = poincare_deviation(d, [](const VectorXd& x) { return x[0]; }, v({1.0}));
  EXPECT_NEAR(p.lhs, 0.5, 1e-9);
  EXPECT_NEAR(p.rhs, 1.0, 1e-9);
  EXPECT_NEAR(p.diameter, 1.0, 1e-12);
}

TEST(Poincare, TwoDimensionalRamp) {
  const GridSet d = GridSet::box(v({0, 0}), v({1, 1}), 0.02);
  const VectorXd x = v({1.0, 0.5});
  const PoincareResult p = poincare_deviation(d, [](const VectorXd& y) { return y[0]; }, x);
  // rhs = (sqrt 2)^2 / 2 * int_D |x - y|^-1 dy; the integral by exact cell kernels.
  double integral = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const VectorXd c = d.center(i);
    integral += cell_kernel_integral(c.array() - 0.01, c.array() + 0.01, x);
  }
  EXPECT_NEAR(p.lhs, 0.5, 1e-9);
  EXPECT_NEAR(p.rhs, integral, 0.02 * integral);
  EXPECT_GE(p.rhs, p.lhs);
}

TEST(Poincare, NonBoxRejected) {
  const GridSet l(2, 0.1, VectorXd::Zero(2),
                  {GridIndex::Zero(2), (GridIndex(2) << 1, 0).finished(), (GridIndex(2) << 0, 1).finished()});
  try {
    poincare_deviation(l, [](const VectorXd& y) { return y[0]; }, v({0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_domain);
  }
}

TEST(SegmentStat, EmptySet) {
  const GridSet empty(2, 0.01, VectorXd::Constant(2, 0.005), {});
  const SegmentStat s = segment_intersection_stat(empty, {v({0.5, 0.5}), 1.0}, v({0.5, 0.5}), 200, 1);
  EXPECT_EQ(s.fraction, 1.0);
  EXPECT_EQ(s.median, 0.0);
}

TEST(SegmentStat, StripAgainstAnalyticIntersection) {
  const double h = 0.01;
  std::vector<GridIndex> strip;
  for (int i = 0; i < 100; ++i) strip.push_back((GridIndex(2) << i, 0).finished());
  const GridSet set(2, h, VectorXd::Constant(2, 0.5 * h), strip);
  const VectorXd x = v({0.5, 0.5});
  // Segment from x to y crosses y2 in [0, 0.01] over a length |y - x| * (0.01 - y2)_+ / (0.5 - y2).
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    const VectorXd y = v({u(rng), 0.01 * u(rng) * 0.5});
    const double exact = (y - x).norm() * (0.01 - y[1]) / (0.5 - y[1]);
    EXPECT_NEAR(segment_intersection_length(set, x, y, 32), exact, 0.05 * exact + 1e-4);
  }
  const SegmentStat s = segment_intersection_stat(set, {v({0.5, 0.5}), 1.0}, x, 400, 2);
  EXPECT_NEAR(s.threshold, 2 * riesz_ball_constant(2) * 0.1, 1e-12);
  EXPECT_GT(s.fraction, 0.5);
}

TEST(SegmentStat, WholeCube) {
  const GridSet all = GridSet::box(v({0, 0}), v({1, 1}), 0.02);
  const SegmentStat s = segment_intersection_stat(all, {v({0.5, 0.5}), 1.0}, v({0.3, 0.6}), 100, 4);
  EXPECT_EQ(s.fraction, 1.0);
  EXPECT_EQ(s.samples, 100u);
}

TEST(SegmentStat, TooFewSamplesRejected) {
  const GridSet all = GridSet::box(v({0, 0}), v({1, 1}), 0.1);
  EXPECT_THROW(segment_intersection_stat(all, {v({0.5, 0.5}), 1.0}, v({0.5, 0.5}), 99, 1), Error);
}
