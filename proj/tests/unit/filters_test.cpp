#include <gtest/gtest.h>

#include <random>

#include "intake/error.hpp"
#include "intake/filters.hpp"
#include "intake/parallel.hpp"
#include "oracles.hpp"

using namespace intake;

TEST(ConvolveSame, MatchesOracleOnRandomInput) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (std::size_t k : {1u, 2u, 5u, 25u, 513u}) {
    std::vector<double> x(3000), taps(k);
    for (auto& v : x) v = g(rng);
    for (auto& v : taps) v = g(rng);
    const auto want = oracle::convolve_same(x, taps);
    EXPECT_LT(oracle::max_rel_error(convolve_same(x, taps), want), 1e-12) << k;
    EXPECT_LT(oracle::max_rel_error(serial::convolve_same(x, taps), want), 1e-12) << k;
  }
}

TEST(ConvolveSame, ShorterThanKernel) {
  const std::vector<double> x{1.0, 2.0};
  const std::vector<double> taps{0.25, 0.5, 0.25, 0.0, 0.0};
  EXPECT_EQ(convolve_same(x, taps), oracle::convolve_same(x, taps));
}

TEST(ConvolveSame, ParallelResultIndependentOfThreadCount) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::vector<double> x(100000), taps(101);
  for (auto& v : x) v = g(rng);
  for (auto& v : taps) v = g(rng);
  const int before = max_threads();
  set_threads(1);
  const auto one = convolve_same(x, taps);
  set_threads(4);
  const auto four = convolve_same(x, taps);
  set_threads(before);
  EXPECT_EQ(one, four);
}

TEST(GaussianTaps, UnitSumOddLength) {
  const auto g = gaussian_taps(6000, 1125.0);
  EXPECT_EQ(g.size(), 6001u);
  double sum = 0.0;
  for (double v : g) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(g[0], g[6000]);
  EXPECT_NEAR(g[3000], 1.0 / (1125.0 * std::sqrt(2.0 * std::acos(-1.0))), 0.01 * 3.55e-4);
}

TEST(HighpassTaps, Validation) {
  EXPECT_THROW(highpass_taps(1, 1.0, 100.0), Error);
  EXPECT_THROW(highpass_taps(64, 60.0, 100.0), Error);
  EXPECT_EQ(highpass_taps(63, 1.0, 100.0).size(), 63u);
}
