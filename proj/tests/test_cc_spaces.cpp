#include "gmt/cc_spaces.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gmt;

namespace {

VectorXd v(std::initializer_list<double> xs) {
  VectorXd out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

Box unit_box(int n) { return {VectorXd::Zero(n), VectorXd::Ones(n)}; }

}  // namespace

TEST(VectorFields, HorizontalNormExamples) {
  const auto plane = VectorFieldSystem::euclidean(2, unit_box(2));
  EXPECT_NEAR(horizontal_norm(plane, v({0.5, 0.5}), v({3, 4})), 5.0, 1e-12);

  const auto heis = VectorFieldSystem::heisenberg(1, Box{VectorXd::Constant(3, -1), VectorXd::Constant(3, 1)});
  // At (0, 0.5, 0): X = (1, 0, 1), Y = (0, 1, 0).
  EXPECT_NEAR(horizontal_norm(heis, v({0, 0.5, 0}), v({1, 0, 1})), 1.0, 1e-12);
  try {
    horizontal_norm(heis, v({0, 0, 0}), v({0, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_horizontal);
  }
}

TEST(VectorFields, GrushinRejectedOnSingularLine) {
  try {
    VectorFieldSystem::grushin(Box{v({-1, 0}), v({1, 1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_fields);
  }
  const auto g = VectorFieldSystem::grushin(Box{v({0.5, 0}), v({1.5, 1})});
  EXPECT_NEAR(g.conditioning().min_field_norm, 0.5, 1e-12);
  EXPECT_NEAR(g.conditioning().constant, 2.0, 1e-12);
}

TEST(VectorFields, FromToml) {
  const auto s = system_from_toml("[sys]\nname = \"heisenberg\"\nn = 1\nbox_lo = [-1.0, -1.0, -1.0]\n"
                                  "box_hi = [1.0, 1.0, 1.0]\n",
                                  "sys");
  EXPECT_EQ(s.n(), 3);
  EXPECT_EQ(s.m(), 2);
  try {
    system_from_toml("name = \"klein\"\nbox_lo = [0.0]\nbox_hi = [1.0]\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::usage);
  }
}

TEST(Paths, LengthsOfConstantControlPath) {
  const auto plane = VectorFieldSystem::euclidean(2, unit_box(2));
  MatrixXd controls(2, 4);
  controls << 0.3, 0.3, 0.3, 0.3, 0.4, 0.4, 0.4, 0.4;
  const HorizontalPathG path = integrate_path(plane, v({0.1, 0.1}), controls);
  EXPECT_NEAR(horizontal_length(path), 0.5, 1e-14);
  EXPECT_NEAR(euclidean_length(path), 0.5, 1e-14);
  EXPECT_LE((path.positions.back() - v({0.4, 0.5})).norm(), 1e-14);
  EXPECT_EQ(path.fine_positions.size(), 17u);
}

TEST(CcGeneral, EuclideanSystemRecoversStraightDistance) {
  const auto plane = VectorFieldSystem::euclidean(2, unit_box(2));
  const CcGeneralResult r = cc_distance_general(plane, v({0.1, 0.2}), v({0.7, 1.0}));
  EXPECT_NEAR(r.upper, 1.0, 0.01);
  EXPECT_LE(r.residual, 1e-6);
  for (std::size_t i = 1; i < r.best_so_far.size(); ++i) EXPECT_LE(r.best_so_far[i], r.best_so_far[i - 1]);
}

TEST(CcGeneral, GrushinHorizontalMoveIsAtMostOne) {
  const auto g = VectorFieldSystem::grushin(Box{v({0.5, 0}), v({1.5, 1})});
  const CcGeneralResult r = cc_distance_general(g, v({0.5, 0.5}), v({1.5, 0.5}));
  EXPECT_LE(r.upper, 1.02);
  EXPECT_GE(r.upper, 1.0 - 1e-6);
}

TEST(CcGeneral, HeisenbergVerticalMatchesClosedForm) {
  const auto heis = VectorFieldSystem::heisenberg(1, Box{VectorXd::Constant(3, -1), VectorXd::Constant(3, 1)});
  const CcGeneralResult r = cc_distance_general(heis, VectorXd::Zero(3), v({0, 0, 0.125}));
  const double exact = std::sqrt(std::numbers::pi * 0.125);
  EXPECT_NEAR(r.upper, exact, 0.05 * exact);
}

TEST(CcGeneral, MetricOracleIsSymmetricEnough) {
  const auto plane = VectorFieldSystem::euclidean(2, unit_box(2));
  const MetricOracle d = cc_metric(plane);
  EXPECT_EQ(d.kind, PointKind::cc);
  EXPECT_NEAR(d(v({0.2, 0.2}), v({0.5, 0.6})), d(v({0.5, 0.6}), v({0.2, 0.2})), 0.01);
}

TEST(WeakBld, LinearMaps) {
  const auto plane = VectorFieldSystem::euclidean(2, unit_box(2));
  std::vector<HorizontalPathG> curves;
  for (int i = 0; i < 10; ++i) {
    const double a = 0.3 * i;
    curves.push_back(integrate_path(plane, v({0.5, 0.5}), MatrixXd(0.4 * v({std::cos(a), std::sin(a)})), 2));
  }
  const BldReport id = weak_bld_estimate([](const VectorXd& x) { return x; }, curves, 2);
  EXPECT_NEAR(id.ratio_min, 1.0, 1e-12);
  EXPECT_NEAR(id.ratio_max, 1.0, 1e-12);
  EXPECT_TRUE(id.passed);

  const VectorMap twice = [](const VectorXd& x) { return VectorXd(2 * x); };
  EXPECT_TRUE(weak_bld_estimate(twice, curves, 2).passed);
  const BldReport tight = weak_bld_estimate(twice, curves, 1.5);
  EXPECT_FALSE(tight.passed);
  EXPECT_NEAR(tight.implied_constant, 2.0, 1e-12);

  const BldReport collapse =
      weak_bld_estimate([](const VectorXd& x) { return v({x[0], 0.0}); },
                        {integrate_path(plane, v({0.5, 0.1}), MatrixXd(v({0.0, 0.8})), 2)}, 2);
  EXPECT_EQ(collapse.ratio_min, 0.0);
  EXPECT_FALSE(collapse.passed);
}

TEST(Quasiconvexity, ConvexBoxIsOne) {
  std::vector<VectorXd> points;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) points.push_back(v({0.2 * i, 0.2 * j}));
  }
  const auto inside = [](const VectorXd& x) { return (x.array() >= -1e-12).all() && (x.array() <= 1 + 1e-12).all(); };
  const QuasiconvexityReport r = quasiconvexity_probe(euclidean_metric(), points, 1000, straight_path_finder(inside), 3);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_EQ(r.pairs.size(), 36u * 35u / 2);
  EXPECT_NEAR(r.m, 1.0, 1e-12);
}

TEST(Quasiconvexity, AnnulusNeedsHalfPi) {
  const auto inside = [](const VectorXd& x) {
    const double r = x.norm();
    return r >= 1 - 1e-9 && r <= 2 + 1e-9;
  };
  std::vector<VectorXd> points;
  for (int i = 0; i < 12; ++i) {
    const double a = 2 * std::numbers::pi * i / 12;
    points.push_back(v({std::cos(a), std::sin(a)}));
    points.push_back(v({1.5 * std::cos(a), 1.5 * std::sin(a)}));
  }
  const Box box{v({-2, -2}), v({2, 2})};
  const QuasiconvexityReport r =
      quasiconvexity_probe(euclidean_metric(), points, 1000, grid_path_finder(inside, box, 0.02), 3);
  EXPECT_EQ(r.failures, 0u);
  // Antipodal points on the inner circle: pi / 2 exactly for the continuum region.
  EXPECT_GE(r.m, std::numbers::pi / 2 * 0.98);
  EXPECT_LE(r.m, std::numbers::pi / 2 * 1.05);

  const QuasiconvexityReport straight =
      quasiconvexity_probe(euclidean_metric(), points, 1000, straight_path_finder(inside), 3);
  EXPECT_GT(straight.failures, 0u);
}
