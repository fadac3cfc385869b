#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wqisa/errors.hpp"
#include "wqisa/estimator.hpp"
#include "wqisa/weights.hpp"

using namespace wqisa;

TEST(WeightIndicator, Examples) {
  EXPECT_EQ(weight_indicator(0, 0, 0, 0, 1), 1.0);
  EXPECT_EQ(weight_indicator(3, 4, 0, 0, 5), 1.0);
  EXPECT_EQ(weight_indicator(3, 4, 0, 0, 4.9), 0.0);
  EXPECT_EQ(weight_indicator(0, 0, 3, 4, 5), weight_indicator(3, 4, 0, 0, 5));
}

TEST(WeightGaussian, Examples) {
  EXPECT_EQ(weight_gaussian(1, 2, 1, 2, 0.3), 1.0);
  for (double sigma : {0.1, 0.5, 1.0, 3.0}) {
    const double d = 2 * sigma * sigma;
    EXPECT_NEAR(weight_gaussian(d, 0, 0, 0, sigma), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(weight_gaussian(0, 0, 0, std::sqrt(d), sigma, true), std::exp(-1.0), 1e-15);
  }
  double prev = 2.0;
  for (double d = 0; d < 5; d += 0.25) {
    const double w = weight_gaussian(d, 0, 0, 0, 0.7);
    EXPECT_LT(w, prev);
    prev = w;
  }
  EXPECT_EQ(weight_gaussian(0.3, 0.1, 0.9, 0.4, 0.5), weight_gaussian(0.9, 0.4, 0.3, 0.1, 0.5));
}

TEST(WeightKnn, AllPointsWhenKIsN) {
  const PointCloud c{{0, 0, 1}, {1, 0, 2}, {2, 0, 3}, {5, 5, 4}};
  for (double w : weight_knn(0.1, 0.1, c, 4)) EXPECT_EQ(w, 0.25);
}

TEST(WeightKnn, SingletonAndCollinear) {
  const PointCloud c{{0, 0, 1}, {1, 0, 2}, {2, 0, 3}, {3, 0, 4}, {4, 0, 5}};
  EXPECT_EQ(weight_knn(2.9, 0, c, 1), (std::vector<double>{0, 0, 0, 1, 0}));
  EXPECT_EQ(weight_knn(0, 0, c, 2), (std::vector<double>{0.5, 0.5, 0, 0, 0}));
  EXPECT_EQ(weight_knn(4, 0, c, 2), (std::vector<double>{0, 0, 0, 0.5, 0.5}));
}

TEST(WeightKnn, TiesGoToEarlierPoints) {
  const PointCloud c{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  EXPECT_EQ(weight_knn(0, 0, c, 2), (std::vector<double>{0.5, 0.5, 0, 0}));
  EXPECT_EQ(weight_knn(0, 0, c, 3), (std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3, 0}));
}

TEST(WeightKnn, Errors) {
  const PointCloud c{{0, 0, 1}};
  EXPECT_THROW(weight_knn(0, 0, {}, 1), InvalidArgument);
  EXPECT_THROW(weight_knn(0, 0, c, 2), InvalidArgument);
  EXPECT_THROW(weight_knn(0, 0, c, 0), InvalidArgument);
}

TEST(WeightKnn, SumsToOne) {
  std::mt19937_64 rng(1);
  const auto c = oracle::random_cloud(rng, 40, Box2{0, 1, 0, 1});
  for (std::size_t k = 1; k <= 40; k += 3) {
    const auto w = weight_knn(0.3, 0.6, c, k);
    double s = 0;
    for (double v : w) s += v;
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
}

TEST(WeightIdw, Examples) {
  const PointCloud far{{2, 0, 1}, {0, 3, 2}};
  EXPECT_EQ(weight_idw(2, 0, 0, 0, far, 1e-12), 0.5);
  EXPECT_EQ(weight_idw(0, 3, 0, 0, far, 0.0), 1.0 / 3.0);

  const PointCloud three{{1, 1, 0}, {1, 1, 1}, {1, 1, 2}, {0, 0, 3}};
  const auto w = weight_idw_all(1, 1, three, 1e-12);
  EXPECT_EQ(w, (std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3, 0}));
  EXPECT_EQ(weight_idw(0, 0, 1, 1, three, 1e-12), 0.0);
}

TEST(WeightIdw, ToleranceCatchesNearCoincidence) {
  const PointCloud c{{1e-9, 0, 5}, {1, 0, 1}};
  EXPECT_EQ(weight_idw_all(0, 0, c, 1e-6), (std::vector<double>{1, 0}));
  EXPECT_DOUBLE_EQ(weight_idw_all(0, 0, c, 0.0)[0], 1e9);
  EXPECT_NEAR(default_coincidence_tolerance(c), 1e-12 * (1 - 1e-9), 1e-24);
}

TEST(Quartiles, LinearInterpolation) {
  const auto q = quartiles({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(q.q1, 1.75);
  EXPECT_DOUBLE_EQ(q.q3, 3.25);
  const auto s = quartiles({5});
  EXPECT_EQ(s.q1, 5);
  EXPECT_EQ(s.q3, 5);
  EXPECT_THROW(quartiles({}), InvalidArgument);
}

TEST(WeightSpec, ValidationAndParameters) {
  EXPECT_THROW(WeightSpec::indicator(0).validate(), InvalidArgument);
  EXPECT_THROW(WeightSpec::gaussian(-1).validate(), InvalidArgument);
  EXPECT_THROW(WeightSpec::knn(0).validate(), InvalidArgument);
  EXPECT_THROW(WeightSpec::truncated_idw(0).validate(), InvalidArgument);
  EXPECT_THROW(WeightSpec::idw(-1.0).validate(), InvalidArgument);
  EXPECT_NO_THROW(WeightSpec::idw(0.0).validate());
  EXPECT_EQ(WeightSpec::knn(3).parameter(), 3.0);
  EXPECT_FALSE(WeightSpec::idw().parameter().has_value());
  EXPECT_EQ(WeightSpec::knn(3).with_parameter(5), WeightSpec::knn(5));
  EXPECT_THROW(WeightSpec::idw().with_parameter(1), InvalidArgument);
  EXPECT_THROW(WeightSpec::knn(1).with_parameter(2.5), InvalidArgument);
  for (auto k : {WeightKind::Indicator, WeightKind::Gaussian, WeightKind::Knn, WeightKind::Idw, WeightKind::TruncatedIdw})
    EXPECT_EQ(weight_kind_from_string(to_string(k)), k);
  EXPECT_THROW(weight_kind_from_string("rbf"), InvalidArgument);
}

TEST(Estimator, ConstantCloud) {
  std::mt19937_64 rng(2);
  auto c = oracle::random_cloud(rng, 30, Box2{0, 1, 0, 1});
  for (auto& p : c) p.z = 5;
  for (const auto& spec : {WeightSpec::indicator(2), WeightSpec::gaussian(0.3), WeightSpec::knn(7), WeightSpec::idw(),
                           WeightSpec::truncated_idw(5), WeightSpec::knn(9).with_filter()})
    EXPECT_EQ(estimate_control_point(c, 0.4, 0.7, spec), 5.0);
}

TEST(Estimator, KnnAllIsMean) {
  const PointCloud c{{0, 0, 1}, {1, 0, 2}, {0, 1, 4}, {1, 1, 9}};
  EXPECT_DOUBLE_EQ(estimate_control_point(c, 0.2, 0.2, WeightSpec::knn(4)), 4.0);
}

TEST(Estimator, IndicatorPicksSinglePoint) {
  const PointCloud c{{0, 0, 1}, {1, 0, 3}};
  EXPECT_EQ(estimate_control_point(c, 0, 0, WeightSpec::indicator(0.5)), 1.0);
}

TEST(Estimator, ZeroWeightIsAnError) {
  const PointCloud c{{0, 0, 1}, {1, 0, 3}};
  EXPECT_THROW(estimate_control_point(c, 5, 5, WeightSpec::indicator(0.5)), ZeroWeight);
  const auto space = TensorSplineSpace::uniform(Box2{0, 4, 0, 4}, 1, 1, 1, 1);
  try {
    estimate_all_coefficients(c, space, WeightSpec::indicator(0.5));
    FAIL();
  } catch (const ZeroWeight& e) {
    ASSERT_TRUE(e.has_index());
    EXPECT_EQ(e.i(), 0u);
    EXPECT_EQ(e.j(), 1u);
  }
}

TEST(Estimator, OutlierFilterDropsSpike) {
  PointCloud c;
  for (int i = 0; i < 9; ++i) c.push_back({0.1 * i, 0, 1.0 + 0.01 * i});
  c.push_back({0.45, 0, 100});
  const ControlPointEstimator est(c);
  const auto raw = est.estimate(0.45, 0, WeightSpec::knn(10));
  const auto filtered = est.estimate(0.45, 0, WeightSpec::knn(10).with_filter());
  EXPECT_GT(raw.value, 10);
  EXPECT_LT(filtered.value, 1.1);
  EXPECT_EQ(filtered.rejected, 1u);
  EXPECT_EQ(filtered.contributors, 9u);
  EXPECT_FALSE(filtered.filter_fallback);
}

TEST(Estimator, FilterFallbackIsFlagged) {
  // With a zero fence and two distinct values, nothing lies inside [Q1, Q3].
  const PointCloud c{{0, 0, 1}, {1, 0, 3}};
  const auto e = ControlPointEstimator(c).estimate(0.5, 0, WeightSpec::knn(2).with_filter(0.0));
  EXPECT_TRUE(e.filter_fallback);
  EXPECT_EQ(e.value, 2.0);
}

TEST(Estimator, TranslationInvariance) {
  std::mt19937_64 rng(3);
  const auto c = oracle::random_cloud(rng, 40, Box2{0, 1, 0, 1}, 0.0, 1.0);
  auto shifted = c;
  for (auto& p : shifted) p.z += 3.0;
  for (const auto& spec : {WeightSpec::knn(5), WeightSpec::gaussian(0.2), WeightSpec::idw(), WeightSpec::indicator(0.4)})
    EXPECT_NEAR(estimate_control_point(shifted, 0.3, 0.3, spec), estimate_control_point(c, 0.3, 0.3, spec) + 3.0,
                1e-14);
}

TEST(Estimator, MatchesBruteForceOracle) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> n_dist(1, 50);
  std::uniform_real_distribution<double> t01(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = oracle::random_cloud(rng, n_dist(rng), Box2{0, 1, 0, 1}, 1.0, 10.0);
    const double u = t01(rng), v = t01(rng);
    std::vector<WeightSpec> specs{WeightSpec::indicator(0.3 + t01(rng)), WeightSpec::gaussian(0.1 + t01(rng)),
                                  WeightSpec::gaussian(0.1 + t01(rng), true),
                                  WeightSpec::knn(1 + static_cast<std::size_t>(t01(rng) * (c.size() - 1))),
                                  WeightSpec::idw(), WeightSpec::truncated_idw(1 + trial % 10)};
    for (auto spec : specs) {
      for (bool filter : {false, true}) {
        if (filter) spec = spec.with_filter();
        const auto ref = oracle::estimate(c, u, v, spec);
        if (!ref) {
          EXPECT_THROW(estimate_control_point(c, u, v, spec), ZeroWeight);
          continue;
        }
        EXPECT_NEAR(estimate_control_point(c, u, v, spec), *ref, 1e-14 * std::abs(*ref)) << describe(spec);
      }
    }
  }
}

TEST(Estimator, BruteForceKnnBitForBit) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t01(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = oracle::random_cloud(rng, 50, Box2{0, 1, 0, 1});
    const std::size_t k = 1 + trial % 50;
    const double u = t01(rng), v = t01(rng);
    EXPECT_EQ(estimate_control_point(c, u, v, WeightSpec::knn(k)), *oracle::estimate(c, u, v, WeightSpec::knn(k)));
  }
}

TEST(EstimateAll, Examples) {
  const PointCloud c{{0, 0, 1}, {1, 0, 2}, {0, 1, 3}, {1, 1, 4}};
  const auto space = TensorSplineSpace::single_element(bounding_box(c), 1, 1);
  const auto s = estimate_all_coefficients(c, space, WeightSpec::knn(1));
  EXPECT_EQ(s.coefficients()(0, 0), 1);
  EXPECT_EQ(s.coefficients()(1, 0), 2);
  EXPECT_EQ(s.coefficients()(0, 1), 3);
  EXPECT_EQ(s.coefficients()(1, 1), 4);

  const auto q = TensorSplineSpace::single_element(bounding_box(c), 2, 2);
  const auto mean = estimate_all_coefficients(c, q, WeightSpec::knn(4));
  for (double v : mean.coefficients().values) EXPECT_EQ(v, 2.5);
}

TEST(EstimateAll, ThreadedMatchesSequential) {
  std::mt19937_64 rng(6);
  const auto c = oracle::random_cloud(rng, 500, Box2{0, 1, 0, 1});
  const auto space = TensorSplineSpace::uniform(Box2{0, 1, 0, 1}, 2, 2, 7, 5);
  for (const auto& spec : {WeightSpec::knn(4), WeightSpec::idw(), WeightSpec::gaussian(0.1)}) {
    const auto a = estimate_all_coefficients(c, space, spec, 1);
    const auto b = estimate_all_coefficients(c, space, spec, 4);
    EXPECT_EQ(a.coefficients(), b.coefficients());
  }
  EXPECT_THROW(estimate_all_coefficients(PointCloud{}, space, WeightSpec::knn(1)), InvalidArgument);
}
