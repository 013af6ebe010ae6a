#include "augspike/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

namespace augspike::stats {
namespace {

const std::vector<double> kA{0.3, -0.1, 0.45, 0.2, 0.05, 0.6, -0.2, 0.33};
const std::vector<double> kB{0.1, 0.0, 0.2, 0.25, -0.1, 0.4, -0.3, 0.1};

TEST(Descriptive, MeanStdDevMedian) {
  EXPECT_NEAR(Mean(kA), 1.63 / 8, 1e-15);
  // Two-pass reference.
  double ss = 0.0;
  for (double x : kA) ss += (x - 1.63 / 8) * (x - 1.63 / 8);
  EXPECT_NEAR(StdDev(kA), std::sqrt(ss / 7), 1e-15);
  EXPECT_DOUBLE_EQ(Median(kA), (0.2 + 0.3) / 2);
  EXPECT_DOUBLE_EQ(Median(std::vector<double>{3, 1, 2}), 2.0);
  EXPECT_EQ(StdDev(std::vector<double>{1.0}), 0.0);
}

TEST(Descriptive, CensoredValuesSortLast) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(Median(std::vector<double>{inf, 1.0, 2.0}), 2.0);
  EXPECT_TRUE(std::isinf(Median(std::vector<double>{inf, inf, 1.0})));
}

// Reference values from scipy.stats.ttest_1samp / ttest_rel.
TEST(TTests, MatchReferenceImplementation) {
  const auto one = OneSampleT(kA);
  EXPECT_NEAR(one.t, 2.110788869801035, 1e-12);
  EXPECT_DOUBLE_EQ(one.df, 7.0);
  EXPECT_NEAR(one.p, 0.07270368684801319, 1e-12);
  const auto paired = PairedT(kA, kB);
  EXPECT_NEAR(paired.t, 2.6424516822882658, 1e-12);
  EXPECT_NEAR(paired.p, 0.033304688102143216, 1e-12);
}

TEST(TTests, ZeroVarianceConvention) {
  EXPECT_EQ(OneSampleT(std::vector<double>{0.0, 0.0, 0.0}).p, 1.0);
  EXPECT_EQ(OneSampleT(std::vector<double>{0.5, 0.5, 0.5}).p, 0.0);
}

}  // namespace
}  // namespace augspike::stats
