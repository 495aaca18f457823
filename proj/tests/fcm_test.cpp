#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qoefis/fcm.hpp"

namespace qoefis {
namespace {

std::vector<double> random_points(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 4.0);
  std::uniform_int_distribution<int> mode(0, 3);
  const double modes[] = {15.0, 40.0, 65.0, 90.0};
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(std::clamp(modes[mode(rng)] + noise(rng), 0.0, 100.0));
  return v;
}

TEST(FcmTest, SingleClusterIsMean) {
  const std::vector<double> x{60, 70, 80, 90};
  FcmConfig cfg;
  cfg.clusters = 1;
  const auto r = fcm_cluster(x, cfg);
  ASSERT_EQ(r.centers.size(), 1u);
  EXPECT_NEAR(r.centers[0], 75.0, 1e-9);
  for (const auto& row : r.memberships) EXPECT_EQ(row[0], 1.0);
}

TEST(FcmTest, TwoWellSeparatedGroups) {
  const std::vector<double> x{0, 1, 2, 98, 99, 100};
  FcmConfig cfg;
  cfg.clusters = 2;
  const auto r = fcm_cluster(x, cfg);
  ASSERT_EQ(r.centers.size(), 2u);
  EXPECT_NEAR(r.centers[0], 1.0, 0.5);
  EXPECT_NEAR(r.centers[1], 99.0, 0.5);
  EXPECT_TRUE(r.converged);
}

TEST(FcmTest, MatchesBruteForceOptimum) {
  const std::vector<double> x{0, 1, 2, 98, 99, 100};
  const auto [a, b] = oracle::fcm_two_center_grid_search(x, 2.0, 0.0, 100.0, 0.1);
  FcmConfig cfg;
  cfg.clusters = 2;
  const auto r = fcm_cluster(x, cfg);
  EXPECT_NEAR(r.centers[0], a, 0.1);
  EXPECT_NEAR(r.centers[1], b, 0.1);
  // The fixed point is no worse than the best grid pair.
  const double grid[2] = {a, b};
  EXPECT_LE(oracle::fcm_reduced_objective(x, r.centers, 2.0), oracle::fcm_reduced_objective(x, grid, 2.0) + 1e-9);
}

TEST(FcmTest, ObjectiveMatchesReducedForm) {
  const auto x = random_points(4, 40);
  const auto r = fcm_cluster(x, FcmConfig{});
  EXPECT_NEAR(r.objective_trace.back(), oracle::fcm_reduced_objective(x, r.centers, 2.0),
              1e-9 * r.objective_trace.back());
}

TEST(FcmTest, InvariantsOnRandomData) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = random_points(seed, 45);
    FcmConfig cfg;
    cfg.seed = seed;
    const auto r = fcm_cluster(x, cfg);
    ASSERT_EQ(r.centers.size(), 4u);
    EXPECT_TRUE(std::is_sorted(r.centers.begin(), r.centers.end()));
    for (double c : r.centers) {
      EXPECT_GE(c, *std::min_element(x.begin(), x.end()));
      EXPECT_LE(c, *std::max_element(x.begin(), x.end()));
    }
    ASSERT_EQ(r.memberships.size(), x.size());
    for (const auto& row : r.memberships) {
      double s = 0.0;
      for (double u : row) {
        EXPECT_GE(u, 0.0);
        EXPECT_LE(u, 1.0);
        s += u;
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
    for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
      EXPECT_LE(r.objective_trace[t], r.objective_trace[t - 1] * (1.0 + 1e-12)) << "seed " << seed << " t " << t;
    }
    EXPECT_LE(r.iterations, cfg.max_iterations);
  }
}

TEST(FcmTest, LargeFuzzifierFlattensMemberships) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 3.0);
  std::vector<double> x;
  for (int i = 0; i < 30; ++i) x.push_back(std::clamp((i % 2 ? 20.0 : 80.0) + noise(rng), 0.0, 100.0));
  const auto distance_from_uniform = [&](double m) {
    FcmConfig cfg;
    cfg.clusters = 2;
    cfg.fuzzifier = m;
    const auto r = fcm_cluster(x, cfg);
    double total = 0.0;
    for (const auto& row : r.memberships) total += std::abs(row[0] - 0.5) + std::abs(row[1] - 0.5);
    return total / static_cast<double>(x.size());
  };
  const double sharp = distance_from_uniform(1.5);
  const double flat = distance_from_uniform(10.0);
  EXPECT_LT(flat, sharp);
  EXPECT_GT(sharp, 0.9);
}

TEST(FcmTest, InputOrderDoesNotMatter) {
  auto x = random_points(9, 50);
  const auto base = fcm_cluster(x, FcmConfig{});
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> shuffled;
  for (auto i : perm) shuffled.push_back(x[i]);
  const auto r = fcm_cluster(shuffled, FcmConfig{});
  EXPECT_EQ(r.centers, base.centers);
  for (std::size_t k = 0; k < perm.size(); ++k) EXPECT_EQ(r.memberships[k], base.memberships[perm[k]]);
}

TEST(FcmTest, SeedDeterminism) {
  const auto x = random_points(10, 50);
  FcmConfig cfg;
  cfg.seed = 42;
  const auto a = fcm_cluster(x, cfg);
  const auto b = fcm_cluster(x, cfg);
  EXPECT_EQ(a.centers, b.centers);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
}

TEST(FcmTest, RestartsNeverWorsenObjective) {
  const auto x = random_points(12, 45);
  FcmConfig one;
  one.restarts = 1;
  FcmConfig many;
  many.restarts = 10;
  EXPECT_LE(fcm_cluster(x, many).objective_trace.back(), fcm_cluster(x, one).objective_trace.back());
}

TEST(FcmTest, PointOnCentreIsCrisp) {
  const std::vector<double> x{0, 0, 0, 10, 10, 10};
  FcmConfig cfg;
  cfg.clusters = 2;
  const auto r = fcm_cluster(x, cfg);
  EXPECT_EQ(r.centers[0], 0.0);
  EXPECT_EQ(r.centers[1], 10.0);
  EXPECT_EQ(r.memberships[0], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(r.memberships[5], (std::vector<double>{0.0, 1.0}));
}

TEST(FcmTest, MembershipRowMatchesClosedForm) {
  const std::vector<double> c{20, 50, 80};
  const double x = 41.0;
  const auto row = fcm_membership_row(x, c, 2.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double s = 0.0;
    for (double cj : c) s += (x - c[i]) * (x - c[i]) / ((x - cj) * (x - cj));
    EXPECT_NEAR(row[i], 1.0 / s, 1e-12);
  }
}

TEST(FcmTest, Errors) {
  const std::vector<double> few{10, 10, 20};
  EXPECT_THROW((void)fcm_cluster(few, FcmConfig{}), InvalidArgument);
  const std::vector<double> bad{1, 2, NAN, 4, 5};
  EXPECT_THROW((void)fcm_cluster(bad, FcmConfig{}), InvalidArgument);
  FcmConfig cfg;
  cfg.fuzzifier = 1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = FcmConfig{};
  cfg.clusters = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(MfsFromCentersTest, Examples) {
  const Universe u;
  const std::vector<std::string> two{"low", "high"};
  auto mfs = mfs_from_centers(std::vector<double>{25, 75}, u, two);
  EXPECT_EQ(mfs[0].left_foot, 0.0);
  EXPECT_EQ(mfs[0].peak, 25.0);
  EXPECT_EQ(mfs[0].right_foot, 75.0);
  EXPECT_EQ(mfs[1].left_foot, 25.0);
  EXPECT_EQ(mfs[1].peak, 75.0);
  EXPECT_EQ(mfs[1].right_foot, 100.0);

  const std::vector<std::string> one{"only"};
  mfs = mfs_from_centers(std::vector<double>{50}, u, one);
  EXPECT_EQ(mfs[0].left_foot, 0.0);
  EXPECT_EQ(mfs[0].right_foot, 100.0);

  const std::vector<std::string> four{"poor", "fair", "good", "excellent"};
  mfs = mfs_from_centers(std::vector<double>{60, 70, 80, 90}, u, four);
  const double expect[4][3] = {{0, 60, 70}, {60, 70, 80}, {70, 80, 90}, {80, 90, 100}};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(mfs[i].left_foot, expect[i][0]);
    EXPECT_EQ(mfs[i].peak, expect[i][1]);
    EXPECT_EQ(mfs[i].right_foot, expect[i][2]);
  }
}

TEST(MfsFromCentersTest, AdjacentTrianglesSumToOneBetweenCentres) {
  const std::vector<std::string> four{"poor", "fair", "good", "excellent"};
  const auto mfs = mfs_from_centers(std::vector<double>{12.5, 40, 71, 93}, Universe{}, four);
  for (double x = 12.5; x <= 93.0; x += 0.37) {
    double s = 0.0;
    for (const auto& mf : mfs) s += mf(x);
    EXPECT_NEAR(s, 1.0, 1e-9) << x;
  }
}

TEST(MfsFromCentersTest, Errors) {
  const Universe u;
  const std::vector<std::string> two{"low", "high"};
  EXPECT_THROW((void)mfs_from_centers(std::vector<double>{50, 50}, u, two), InvalidArgument);
  EXPECT_THROW((void)mfs_from_centers(std::vector<double>{70, 50}, u, two), InvalidArgument);
  EXPECT_THROW((void)mfs_from_centers(std::vector<double>{50, 120}, u, two), RangeError);
  EXPECT_THROW((void)mfs_from_centers(std::vector<double>{50}, u, two), InvalidArgument);
}

}  // namespace
}  // namespace qoefis
