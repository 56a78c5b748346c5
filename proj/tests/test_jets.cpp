#include "gmt/io.hpp"
#include "gmt/jets.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace gmt;

namespace {

VectorXd v(std::initializer_list<double> xs) {
  VectorXd out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

std::vector<GridIndex> square(int lo, int hi) {
  return grid_box(GridIndex::Constant(2, lo), GridIndex::Constant(2, hi));
}

std::size_t index_of(const SampledMap& f, std::initializer_list<int> idx) {
  GridIndex g(static_cast<Index>(idx.size()));
  Index i = 0;
  for (int x : idx) g[i++] = x;
  return *f.find(g);
}

// Real root of u^3 + u = c (Cardano; the discriminant is positive).
double cubic_root(double c) {
  const double s = std::sqrt(c * c / 4 + 1.0 / 27);
  return std::cbrt(c / 2 + s) + std::cbrt(c / 2 - s);
}

}  // namespace

TEST(NumericalRank, Examples) {
  EXPECT_EQ(numerical_rank(MatrixXd::Zero(3, 2), 1e-6), 0);
  EXPECT_EQ(numerical_rank(MatrixXd::Identity(3, 3), 1e-6), 3);
  MatrixXd m(3, 2);
  m << 1, 1, 2, 2, 1, 1;
  EXPECT_EQ(numerical_rank(m, 1e-6), 1);
  // Gram matrix [[6,6],[6,6]] has eigenvalue 12.
  EXPECT_NEAR(Eigen::JacobiSVD<MatrixXd>(m).singularValues()[0], std::sqrt(12.0), 1e-12);
  EXPECT_THROW(numerical_rank(m, 0.0), Error);
}

TEST(NumericalRank, PermutationAndScalingInvariance) {
  MatrixXd m(3, 3);
  m << 1, 2, 3, 0, 1e-3, 1, 2, 4.001, 7;
  const int base = numerical_rank(m, 1e-6);
  MatrixXd permuted = m;
  permuted.row(0).swap(permuted.row(2));
  EXPECT_EQ(numerical_rank(permuted, 1e-6), base);
  EXPECT_EQ(numerical_rank(MatrixXd(2 * m), 1e-6), base);
}

TEST(ApproxJet, IdentityAndConstant) {
  const SampledMap id = SampledMap::sample(
      2, 0.1, square(-5, 5), [](const VectorXd& x) { return x; }, euclidean_metric());
  const ApproxJet j = approx_jet(id, index_of(id, {0, 0}));
  EXPECT_LE((j.derivative - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(j.rank, 2);
  EXPECT_LE(j.residual, 1e-12);

  const SampledMap c = SampledMap::sample(
      2, 0.1, square(-5, 5), [](const VectorXd&) { return v({4.0, -1.0}); }, euclidean_metric());
  const ApproxJet jc = approx_jet(c, index_of(c, {1, 2}));
  EXPECT_EQ(jc.derivative.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(jc.rank, 0);
}

TEST(ApproxJet, ParallelRowsGiveRankOne) {
  const SampledMap f = SampledMap::sample(
      2, 0.01, square(-5, 5),
      [](const VectorXd& x) {
        const double s = x[0] + x[1];
        return v({s, 2 * s, std::sin(s)});
      },
      euclidean_metric());
  const ApproxJet j = approx_jet(f, index_of(f, {0, 0}));
  MatrixXd analytic(3, 2);
  analytic << 1, 1, 2, 2, 1, 1;
  // sin has a third derivative, so the quadratic fit is off by O(rho^2).
  EXPECT_LE((j.derivative - analytic).cwiseAbs().maxCoeff(), std::pow(3 * 0.01, 2));
  EXPECT_EQ(j.rank, 1);
}

TEST(ApproxJet, PolynomialAccuracyWithinFirstOrderBound) {
  // Second derivatives bounded by 2; the affine fit error must stay below 10 * rho * 2.
  const double h = 0.02;
  const SampledMap f = SampledMap::sample(
      2, h, square(-10, 10), [](const VectorXd& x) { return v({x[0] * x[0] + x[0] * x[1], x[1] * x[1] - x[0]}); },
      euclidean_metric());
  JetOptions affine;
  affine.order = 1;
  for (std::size_t i = 0; i < f.size(); i += 17) {
    try {
      const ApproxJet j = approx_jet(f, i, affine);
      const VectorXd x = f.point(i);
      MatrixXd d(2, 2);
      d << 2 * x[0] + x[1], x[0], -1, 2 * x[1];
      EXPECT_LE((j.derivative - d).cwiseAbs().maxCoeff(), 10 * 3 * h * 2);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::insufficient_density);
    }
  }
}

TEST(ApproxJet, SparseNeighborhoodIsInsufficient) {
  const SampledMap f = SampledMap::sample(
      2, 0.1, square(0, 1), [](const VectorXd& x) { return x; }, euclidean_metric());
  try {
    approx_jet(f, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_density);
  }
}

TEST(Stratify, IdentityAndConstant) {
  const SampledMap id = SampledMap::sample(
      2, 0.1, square(0, 10), [](const VectorXd& x) { return x; }, euclidean_metric());
  const Stratification s = stratify_critical(id);
  EXPECT_EQ(s.regular.size() + s.unresolved.size(), id.size());
  // Oracle: a node is unresolved exactly when fewer than 60% of its punctured radius-3 lattice
  // ball lies on the grid.
  std::size_t expected_unresolved = 0;
  for (const GridIndex& g : id.indices()) {
    int total = 0, present = 0;
    for (int a = -3; a <= 3; ++a) {
      for (int b = -3; b <= 3; ++b) {
        if ((a == 0 && b == 0) || a * a + b * b > 9) continue;
        ++total;
        const int x = g[0] + a, y = g[1] + b;
        if (x >= 0 && x <= 10 && y >= 0 && y <= 10) ++present;
      }
    }
    if (present < 0.6 * total) ++expected_unresolved;
  }
  EXPECT_EQ(s.unresolved.size(), expected_unresolved);
  EXPECT_GT(expected_unresolved, 0u);

  const SampledMap c = SampledMap::sample(
      2, 0.1, square(0, 10), [](const VectorXd&) { return v({1.0}); }, euclidean_metric());
  const Stratification sc = stratify_critical(c);
  EXPECT_EQ(sc.strata[0].size() + sc.unresolved.size(), c.size());
}

TEST(Stratify, MatchesAnalyticRankOnFoldSurface) {
  // (x1^2, x1 x2): Jacobian rows (2 x1, 0), (x2, x1).
  const double h = 0.02;
  const SampledMap f = SampledMap::sample(
      2, h, square(-50, 50), [](const VectorXd& x) { return v({x[0] * x[0], x[0] * x[1]}); },
      euclidean_metric());
  const Stratification s = stratify_critical(f);
  std::size_t resolved = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (s.labels[i] < 0) continue;
    ++resolved;
    const GridIndex& g = f.index(i);
    const int expected = g[0] != 0 ? 2 : (g[1] != 0 ? 1 : 0);
    EXPECT_EQ(s.labels[i], expected) << "at " << g.transpose();
  }
  EXPECT_GE(resolved, f.size() - 20);
  // Partition property.
  std::size_t total = s.regular.size() + s.unresolved.size();
  for (const auto& k : s.strata) total += k.size();
  EXPECT_EQ(total, f.size());
}

TEST(Stratify, RadiusBelowTwoSpacingsRejected) {
  const SampledMap id = SampledMap::sample(
      2, 0.1, square(0, 5), [](const VectorXd& x) { return x; }, euclidean_metric());
  JetOptions o;
  o.rho = 0.15;
  EXPECT_THROW(stratify_critical(id, o), Error);
}

TEST(AreaFormula, DoublingMap) {
  const SampledMap g = SampledMap::sample(
      2, 0.01, square(0, 100), [](const VectorXd& x) { return VectorXd(2 * x); }, euclidean_metric());
  const AreaCheck c = area_formula_check(g);
  EXPECT_NEAR(c.lhs, 4.0, 1e-6);
  EXPECT_NEAR(c.rhs, 4.0, 0.04);
  EXPECT_LT(c.gap, 0.01);
  EXPECT_FALSE(c.analytic_jacobian);
}

TEST(AreaFormula, FoldHasMultiplicityTwo) {
  const double h = 0.005;
  const SampledMap g = SampledMap::sample(
      1, h, grid_box(GridIndex::Zero(1), GridIndex::Constant(1, 200)),
      [](const VectorXd& x) { return v({std::abs(x[0] - 0.5)}); }, euclidean_metric());
  const Multiplicity m = multiplicity_estimate(g, h);
  EXPECT_NEAR(m.integral(1), 1.0, 0.01);
  for (const auto& [cell, count] : m.counts) {
    // Interior target cells of [0, 0.5] are hit by both branches.
    if (cell[0] > 1 && cell[0] < 98) {
      EXPECT_EQ(count, 2);
    }
  }
  AreaOptions o;
  o.jacobian = [](const VectorXd& x) {
    MatrixXd d(1, 1);
    d(0, 0) = x[0] >= 0.5 ? 1.0 : -1.0;
    return d;
  };
  const AreaCheck c = area_formula_check(g, o);
  EXPECT_NEAR(c.lhs, 1.0, 1e-9);
  EXPECT_NEAR(c.rhs, 1.0, 0.01);
}

TEST(AreaFormula, ConstantMap) {
  const SampledMap g = SampledMap::sample(
      2, 0.05, square(0, 20), [](const VectorXd&) { return v({0.3, 0.3}); }, euclidean_metric());
  AreaOptions o;
  o.jacobian = [](const VectorXd&) { return MatrixXd(MatrixXd::Zero(2, 2)); };
  const AreaCheck c = area_formula_check(g, o);
  EXPECT_EQ(c.lhs, 0.0);
  EXPECT_EQ(c.rhs, 0.0);
}

TEST(AreaFormula, SurfaceInR3UsesSimplexAreas) {
  // Graph of 0.5 (x1 + x2): area factor sqrt(1.5).
  const SampledMap g = SampledMap::sample(
      2, 0.01, square(0, 100), [](const VectorXd& x) { return v({x[0], x[1], 0.5 * (x[0] + x[1])}); },
      euclidean_metric());
  const AreaCheck c = area_formula_check(g);
  EXPECT_NEAR(c.lhs, std::sqrt(1.5), 1e-6);
  EXPECT_NEAR(c.rhs, std::sqrt(1.5), 1e-9);
}

TEST(AreaFormula, GapShrinksWithSpacing) {
  struct Case {
    int k;
    VectorMap g;
    JacobianMap d;
  };
  const std::vector<Case> cases = {
      {2, [](const VectorXd& x) { return VectorXd(2 * x); },
       [](const VectorXd&) { return MatrixXd(2 * MatrixXd::Identity(2, 2)); }},
      {1, [](const VectorXd& x) { return v({std::abs(x[0] - 0.5)}); },
       [](const VectorXd& x) {
         MatrixXd d(1, 1);
         d(0, 0) = x[0] >= 0.5 ? 1.0 : -1.0;
         return d;
       }},
      {2, [](const VectorXd& x) { return v({x[0] + 0.2 * x[1] * x[1], x[1] + 0.1 * std::pow(x[0], 3)}); },
       [](const VectorXd& x) {
         MatrixXd d(2, 2);
         d << 1, 0.4 * x[1], 0.3 * x[0] * x[0], 1;
         return d;
       }},
  };
  for (const auto& c : cases) {
    double previous = std::numeric_limits<double>::infinity();
    for (int n : {25, 50, 100}) {
      const SampledMap g = SampledMap::sample(
          c.k, 1.0 / n, grid_box(GridIndex::Zero(c.k), GridIndex::Constant(c.k, n)), c.g, euclidean_metric());
      AreaOptions o;
      o.jacobian = c.d;
      const double gap = area_formula_check(g, o).gap;
      // Gaps at rounding level cannot shrink further.
      EXPECT_TRUE(gap < previous || gap < 1e-10) << "n=" << n << " gap=" << gap << " previous=" << previous;
      previous = gap;
    }
  }
}

TEST(AreaFormula, TooManyUnresolvedJets) {
  const SampledMap g = SampledMap::sample(
      2, 0.1, square(0, 4), [](const VectorXd& x) { return x; }, euclidean_metric());
  try {
    area_formula_check(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unreliable_check);
  }
}

TEST(Straightening, FirstCoordinateAlreadyStraight) {
  const Straightening s = straightening_map(
      [](const VectorXd& x) { return v({x[0], x[0] * x[0]}); }, VectorXd::Zero(2), 1);
  for (const VectorXd& w : {v({0.3, -0.2}), v({-0.5, 0.1})}) {
    EXPECT_LE((s.forward(w) - w).norm(), 1e-15);
    EXPECT_NEAR(s.straightened(w)[0], w[0], 1e-15);
  }
  EXPECT_LT(s.max_residual(), 1e-8);
}

TEST(Straightening, CubicAgainstCardano) {
  const Straightening s = straightening_map(
      [](const VectorXd& x) { return v({x[0] * x[0] * x[0] + x[0], x[1] * x[1]}); }, VectorXd::Zero(2), 1);
  const VectorXd w = v({0.2, 0.3});
  const VectorXd u = s.inverse(w);
  EXPECT_NEAR(u[0], cubic_root(0.2), 1e-12);
  EXPECT_NEAR(u[1], 0.3, 1e-15);
  EXPECT_NEAR(s.straightened(w)[0], 0.2, 1e-8);
  EXPECT_EQ(s.test_points().size(), 25u);
  EXPECT_LT(s.max_residual(), 1e-8);
}

TEST(Straightening, LinearMapInvertsExactly) {
  MatrixXd a(3, 3);
  a << 2, 1, 0, 1, 3, 1, 5, 5, 5;
  const Straightening s = straightening_map([a](const VectorXd& x) { return VectorXd(a * x); }, VectorXd::Zero(3), 2,
                                            {}, {}, {}, [a](const VectorXd&) { return a; });
  EXPECT_DOUBLE_EQ(s.radius(), 1.0);
  const VectorXd w = v({0.4, -0.3, 0.2});
  EXPECT_LE((s.straightened(w).head(2) - w.head(2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Straightening, SingularMinorNeedsPermutation) {
  const VectorMap swap = [](const VectorXd& x) { return v({x[1], x[0]}); };
  try {
    straightening_map(swap, VectorXd::Zero(2), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::needs_permutation);
  }
  const Straightening s = straightening_map(swap, VectorXd::Zero(2), 1, {1, 0});
  EXPECT_LT(s.max_residual(), 1e-8);
}

TEST(CriticalCover, ConstantMapSingleBall) {
  const SampledMap f = SampledMap::sample(
      2, 0.1, square(0, 10), [](const VectorXd&) { return v({1.0, 1.0}); }, linf_metric());
  JetOptions o;
  o.min_fill = 0.3;
  const CriticalCover cc = critical_cover(f, stratify_critical(f, o), 0, 4);
  ASSERT_EQ(cc.cover.balls.size(), 1u);
  EXPECT_EQ(cc.failures, 0u);
  EXPECT_LE(linf_distance(cc.cover.balls[0].center, v({1.0, 1.0})), 0.0);
}

TEST(CriticalCover, FlatMapEightBalls) {
  const SampledMap f = SampledMap::sample(
      2, 1.0 / 80, square(0, 80), [](const VectorXd& x) { return v({x[0], 0.0}); }, linf_metric());
  JetOptions o;
  o.min_fill = 0.3;
  const Stratification s = stratify_critical(f, o);
  const CriticalCover cc = critical_cover(f, s, 1, 8);
  EXPECT_EQ(cc.cover.balls.size(), 8u);
  EXPECT_EQ(cc.failures, 0u);
  // Exhaustive membership: each point of K_1 lies in the ball of its box.
  for (std::size_t i : s.strata[1]) {
    bool inside = false;
    for (const Ball& b : cc.cover.balls) inside = inside || linf_distance(f.value(i), b.center) <= b.radius * (1 + 1e-12);
    EXPECT_TRUE(inside);
  }
  EXPECT_NEAR(cc.cover.balls[0].radius, cc.constant * cc.lipschitz * cc.edge / 8, 1e-15);
}

TEST(CriticalCover, CurveContentDecaysLikeOneOverM) {
  // Arc-length circle arc in the first coordinate pair.
  const SampledMap f = SampledMap::sample(
      2, 1.0 / 160, square(0, 160), [](const VectorXd& x) { return v({x[0], std::cos(x[0]), std::sin(x[0])}); },
      euclidean_metric());
  JetOptions o;
  o.min_fill = 0.3;
  const Stratification s = stratify_critical(f, o);
  std::vector<double> ms, contents;
  for (int m : {2, 4, 8, 16}) {
    const CriticalCover cc = critical_cover(f, s, 1, m);
    EXPECT_EQ(cc.failures, 0u);
    ms.push_back(m);
    contents.push_back(cc.cover.content());
    // Content bound m^j (C L d / m)^k <= 5^k C^k L^k m^(j-k).
    const double bound = std::pow(5 * cc.constant * cc.lipschitz, 2) / m;
    EXPECT_LE(cc.cover.content(), bound);
  }
  EXPECT_NEAR(loglog_fit(ms, contents).slope, -1.0, 0.3);
}

TEST(CriticalCover, DensityConditionAndFailureDump) {
  const SampledMap f = SampledMap::sample(
      2, 0.1, square(0, 10), [](const VectorXd& x) { return v({x[0], 0.0}); }, linf_metric());
  Stratification s = stratify_critical(f);  // default fill leaves the corners unresolved
  try {
    critical_cover(f, s, 1, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::cube_too_coarse);
  }
  const auto path = std::filesystem::temp_directory_path() / "gmt_cover_failures.csv";
  CriticalCoverOptions opts;
  opts.constant = 0.1;
  opts.failure_csv = path.string();
  const CriticalCover cc = critical_cover(f, s, 1, 2, opts);
  EXPECT_GT(cc.failures, 0u);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "point,box,distance,radius");
  std::filesystem::remove(path);
}

TEST(JetsJson, StratificationSerializes) {
  const SampledMap id = SampledMap::sample(
      2, 0.1, square(0, 6), [](const VectorXd& x) { return x; }, euclidean_metric());
  const Json j = to_json(stratify_critical(id));
  EXPECT_EQ(j.at("k"), 2);
  EXPECT_EQ(j.at("labels").size(), id.size());
}
