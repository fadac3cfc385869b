#include <gtest/gtest.h>

#include <cmath>

#include "wqisa/errors.hpp"
#include "wqisa/synthetic.hpp"

using namespace wqisa;

TEST(Hemisphere, CentreValue) { EXPECT_DOUBLE_EQ(hemisphere(0.5, 0.5), 8.0 / 8.5); }

TEST(Hemisphere, NegativeRadicandIsNan) {
  EXPECT_TRUE(std::isnan(hemisphere(2.0, 2.0)));
  EXPECT_FALSE(std::isnan(hemisphere(0.0, 0.0)));
}

TEST(HemisphereCloud, ExactNonnegativeSamples) {
  const auto c = hemisphere_cloud(5000, 1);
  ASSERT_EQ(c.size(), 5000u);
  for (const auto& p : c) {
    EXPECT_GE(p.z, 0.0);
    EXPECT_EQ(p.z, hemisphere(p.x, p.y));
    EXPECT_TRUE(p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1);
  }
  EXPECT_EQ(hemisphere_cloud(100, 9), hemisphere_cloud(100, 9));
  EXPECT_NE(hemisphere_cloud(100, 9), hemisphere_cloud(100, 10));
  EXPECT_THROW(hemisphere_cloud(0, 1), InvalidArgument);
}

TEST(Perturb, IdentityWithoutNoise) {
  const auto c = hemisphere_cloud(200, 2);
  EXPECT_EQ(perturb(c, Perturbation{}, 3), c);
}

TEST(Perturb, FullOutlierFractionReplacesEveryZ) {
  const auto c = hemisphere_cloud(300, 4);
  const auto p = perturb(c, Perturbation{0, 1.0, 2.0}, 5);
  const auto r = z_range(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(p[i].x, c[i].x);
    EXPECT_NE(p[i].z, c[i].z);
    const double mid = 0.5 * (r.min + r.max);
    EXPECT_LE(std::abs(p[i].z - mid), (r.max - r.min) + 1e-12);
  }
}

TEST(Perturb, OutlierCountIsRounded) {
  const auto c = hemisphere_cloud(1000, 6);
  const auto p = perturb(c, Perturbation{0, 0.1, 1}, 7);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < c.size(); ++i) changed += p[i].z != c[i].z;
  EXPECT_EQ(changed, 100u);
}

TEST(Perturb, NoiseMeanWithinThreeSigmaOverSqrtN) {
  const std::size_t n = 100000;
  const auto c = hemisphere_cloud(n, 8);
  const double sigma = 0.1;
  const auto p = perturb(c, Perturbation{sigma, 0, 1}, 9);
  double mean = 0;
  for (std::size_t i = 0; i < n; ++i) mean += p[i].z - c[i].z;
  mean /= n;
  EXPECT_LT(std::abs(mean), 3 * sigma / std::sqrt(double(n)));
}

TEST(Perturb, Deterministic) {
  const auto c = hemisphere_cloud(500, 10);
  const Perturbation pr{0.05, 0.2, 1.5};
  EXPECT_EQ(perturb(c, pr, 11), perturb(c, pr, 11));
  EXPECT_NE(perturb(c, pr, 11), perturb(c, pr, 12));
}

TEST(Perturb, InvalidArguments) {
  const auto c = hemisphere_cloud(10, 1);
  EXPECT_THROW(perturb(c, Perturbation{0, 1.5, 1}, 0), InvalidArgument);
  EXPECT_THROW(perturb(c, Perturbation{-1, 0, 1}, 0), InvalidArgument);
  EXPECT_THROW(perturb(c, Perturbation{0, 0.5, -1}, 0), InvalidArgument);
}

TEST(Lattice, RowsInY) {
  const auto c = lattice_cloud([](double x, double y) { return x + 10 * y; }, Box2{0, 1, 0, 2}, 3, 2);
  ASSERT_EQ(c.size(), 6u);
  EXPECT_EQ(c[0], (Point3{0, 0, 0}));
  EXPECT_EQ(c[2], (Point3{1, 0, 1}));
  EXPECT_EQ(c[5], (Point3{1, 2, 21}));
}
