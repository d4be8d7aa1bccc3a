#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "uwhunt/errors.hpp"
#include "uwhunt/metrics.hpp"
#include "uwhunt/rng.hpp"

using namespace uwh;

namespace {

std::vector<double> random_series(Rng& rng, std::size_t n, int levels) {
  std::vector<double> v(n);
  for (auto& x : v)
    x = levels > 0 ? static_cast<double>(rng.uniform_index(static_cast<std::uint64_t>(levels)))
                   : rng.uniform(-1, 1);
  return v;
}

}  // namespace

TEST(Kendall, Examples) {
  const std::vector<double> a{1, 2, 3};
  EXPECT_DOUBLE_EQ(kendall_pair(a, std::vector<double>{1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(kendall_pair(a, std::vector<double>{3, 2, 1}), -1.0);
  EXPECT_NEAR(kendall_pair(a, std::vector<double>{3, 1, 2}), -1.0 / 3.0, 1e-15);
}

TEST(Kendall, Errors) {
  EXPECT_THROW(kendall_pair(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), DomainError);
  EXPECT_THROW(kendall_pair(std::vector<double>{1}, std::vector<double>{1}), DomainError);
}

TEST(Kendall, MatchesBruteForceOracle) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + rng.uniform_index(49);
    const int levels = k % 3 == 0 ? 4 : 0;  // some series with ties
    const auto a = random_series(rng, n, levels), b = random_series(rng, n, levels);
    EXPECT_NEAR(kendall_pair(a, b), oracle::kendall(a, b), 1e-15);
  }
}

TEST(Kendall, SymmetricAndRankInvariant) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const auto a = random_series(rng, 30, 0), b = random_series(rng, 30, k % 2 ? 5 : 0);
    const double base = kendall_pair(a, b);
    EXPECT_EQ(base, kendall_pair(b, a));
    std::vector<double> ta(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) ta[i] = std::exp(3 * a[i]) + 7.0;
    EXPECT_EQ(kendall_pair(ta, b), base);
    EXPECT_GE(base, -1.0);
    EXPECT_LE(base, 1.0);
  }
}

TEST(Kendall, InfinitePayoffsAreOrdered) {
  const double inf = INFINITY;
  EXPECT_DOUBLE_EQ(kendall_pair(std::vector<double>{1, 2, inf}, std::vector<double>{0, 1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(kendall_pair(std::vector<double>{inf, inf}, std::vector<double>{0, 1}), 0.0);
}

TEST(ConsistencyIndex, Examples) {
  const std::vector<double> s{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(consistency_index({s, s, s}), 1.0);
  EXPECT_DOUBLE_EQ(consistency_from_pairs(std::vector<double>{0.5}, 2, false), 0.25);
  for (int m = 2; m <= 6; ++m) {
    std::vector<std::vector<double>> all(static_cast<std::size_t>(m), s);
    EXPECT_DOUBLE_EQ(consistency_index(all), (m * (m - 1) / 2.0) / m);
    EXPECT_DOUBLE_EQ(consistency_index(all, true), 1.0);
  }
  EXPECT_THROW(consistency_index({s}), DomainError);
}

TEST(ConsistencyIndex, RelabelingInvariant) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    std::vector<std::vector<double>> series;
    for (int i = 0; i < 4; ++i) series.push_back(random_series(rng, 20, 0));
    const double base = consistency_index(series);
    std::swap(series[0], series[3]);
    std::swap(series[1], series[2]);
    EXPECT_NEAR(consistency_index(series), base, 1e-15);
  }
}

TEST(PairwiseKendall, LexicographicOrder) {
  const std::vector<double> a{1, 2, 3}, b{3, 2, 1}, c{3, 1, 2};
  const auto p = pairwise_kendall({a, b, c});
  ASSERT_EQ(p.size(), 3u);
  EXPECT_DOUBLE_EQ(p[0], kendall_pair(a, b));
  EXPECT_DOUBLE_EQ(p[1], kendall_pair(a, c));
  EXPECT_DOUBLE_EQ(p[2], kendall_pair(b, c));
}

TEST(Smooth, Examples) {
  const std::vector<double> v{0, 3, 0};
  const auto s = smooth_curve(v, 3);
  EXPECT_DOUBLE_EQ(s[0], 1.5);
  EXPECT_DOUBLE_EQ(s[1], 1.0);
  EXPECT_DOUBLE_EQ(s[2], 1.5);
  Rng rng(4);
  const auto r = random_series(rng, 40, 0);
  EXPECT_EQ(smooth_curve(r, 1), r);
}

TEST(Smooth, ConstantSeriesIsExact) {
  for (double c : {0.1, -7.3, 1e-9, 12345.678}) {
    const std::vector<double> v(101, c);
    for (int w : {1, 3, 51, 201}) EXPECT_EQ(smooth_curve(v, w), v);
  }
}

TEST(Smooth, MatchesDirectWindow) {
  Rng rng(5);
  const auto v = random_series(rng, 60, 0);
  const int w = 7;
  const auto s = smooth_curve(v, w);
  for (int k = 0; k < 60; ++k) {
    double sum = 0.0;
    int n = 0;
    for (int j = std::max(0, k - 3); j <= std::min(59, k + 3); ++j, ++n) sum += v[j];
    EXPECT_NEAR(s[k], sum / n, 1e-14);
  }
}

TEST(Smooth, BadWindows) {
  const std::vector<double> v{1, 2, 3};
  EXPECT_THROW(smooth_curve(v, 0), DomainError);
  EXPECT_THROW(smooth_curve(v, 4), DomainError);
}
