#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "intake/error.hpp"
#include "intake/evaluate.hpp"
#include "oracles.hpp"

using namespace intake;

TEST(MatchBites, HandComputedFixture) {
  const std::vector<BiteAnnotation> truth{{0, 4}, {10, 14}};
  EXPECT_EQ(match_bites({{2, 3, 20}}, truth), (BiteConfusion{1, 2, 1}));
  EXPECT_EQ(match_bites({{2, 12}}, truth), (BiteConfusion{2, 0, 0}));
  EXPECT_EQ(match_bites({}, truth), (BiteConfusion{0, 0, 2}));
}

TEST(MatchBites, OverlappingTruthIsAnError) {
  const std::vector<BiteAnnotation> truth{{0, 5}, {4, 8}};
  EXPECT_THROW(match_bites({{1}}, truth), Error);
}

TEST(MatchBites, Invariants) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.0, 500.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BiteAnnotation> truth;
    for (double t = 0.0; t < 480.0; t += 10.0) truth.push_back({t + 1.0, t + 6.0});
    BiteSet det;
    for (int i = 0; i < 60; ++i) det.timestamps_s.push_back(u(rng));
    std::sort(det.timestamps_s.begin(), det.timestamps_s.end());
    const auto c = match_bites(det, truth);
    EXPECT_EQ(c.tp + c.fn, truth.size());
    EXPECT_EQ(c.tp + c.fp, det.size());
  }
}

TEST(PrecisionRecall, Examples) {
  // published three-decimal figures are truncated, not rounded
  const auto r = precision_recall_f1(1231, 102, 101);
  EXPECT_EQ(std::floor(r.precision * 1000.0), 923.0);
  EXPECT_EQ(std::floor(r.recall * 1000.0), 924.0);
  EXPECT_EQ(std::floor(r.f1 * 1000.0), 923.0);
  EXPECT_DOUBLE_EQ(r.f1, 2462.0 / 2665.0);
  const auto z = precision_recall_f1(0, 0, 5);
  EXPECT_EQ(z.precision, 0.0);
  EXPECT_EQ(z.recall, 0.0);
  EXPECT_EQ(z.f1, 0.0);
  const auto h = precision_recall_f1(10, 10, 10);
  EXPECT_DOUBLE_EQ(h.precision, 0.5);
  EXPECT_DOUBLE_EQ(h.recall, 0.5);
  EXPECT_DOUBLE_EQ(h.f1, 0.5);
}

TEST(MealConfusion, IntervalArithmetic) {
  const MealIntervalSet est{{100, 200}}, truth{{150, 250}};
  EXPECT_EQ(meal_confusion(est, truth, 1000), (MealConfusion{50, 50, 50, 850}));
  const auto same = meal_confusion(truth, truth, 1000);
  EXPECT_EQ(same.fp, 0u);
  EXPECT_EQ(same.fn, 0u);
  const auto none = meal_confusion({}, truth, 1000);
  EXPECT_EQ(none.tp, 0u);
  EXPECT_EQ(none.fp, 0u);
  EXPECT_EQ(none.fn, 100u);
  EXPECT_EQ(none.total(), 1000u);
}

TEST(MealConfusion, ResolutionRefinementIsStable) {
  const MealIntervalSet est{{100.37, 612.81}, {2000.5, 2300.2}}, truth{{130.02, 600.66}, {1990.9, 2310.4}};
  const auto coarse = meal_confusion(est, truth, 4000.0, 1.0);
  const auto fine = meal_confusion(est, truth, 4000.0, 0.1);
  // 4 boundaries per set, at most 2 coarse cells each
  const double slack = 2.0 * 8.0;
  EXPECT_NEAR(static_cast<double>(coarse.tp), static_cast<double>(fine.tp) / 10.0, slack);
  EXPECT_NEAR(static_cast<double>(coarse.fp), static_cast<double>(fine.fp) / 10.0, slack);
  EXPECT_NEAR(static_cast<double>(coarse.fn), static_cast<double>(fine.fn) / 10.0, slack);
  EXPECT_EQ(fine.total(), 40000u);
}

TEST(WeightedAccuracy, Formula) {
  const MealConfusion c{50, 50, 50, 850};
  EXPECT_NEAR(weighted_accuracy(c, 10.0), 1350.0 / 1900.0, 1e-12);
  EXPECT_NEAR(weighted_accuracy(c, 10.0), 0.7105, 1e-4);
  EXPECT_DOUBLE_EQ(weighted_accuracy(c, 1.0), accuracy(c));
  const MealConfusion perfect{30, 0, 0, 970};
  for (double r : {0.5, 1.0, 14.2, 100.0}) EXPECT_DOUBLE_EQ(weighted_accuracy(perfect, r), 1.0);
}

TEST(WeightedAccuracy, RatioOneEqualsAccuracyOnRandomConfusions) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<std::size_t> u(0, 10000);
  for (int i = 0; i < 100; ++i) {
    const MealConfusion c{u(rng), u(rng), u(rng), u(rng) + 1};
    EXPECT_NEAR(weighted_accuracy(c, 1.0), accuracy(c), 1e-15);
  }
}

TEST(DurationRatio, TableTwoValue) {
  EXPECT_DOUBLE_EQ(duration_ratio(77.32, 5.42), 77.32 / 5.42);
  EXPECT_EQ(std::floor(duration_ratio(77.32, 5.42) * 10.0), 142.0);
  const MealIntervalSet truth{{0, 100}, {500, 600}};
  EXPECT_DOUBLE_EQ(meal_weight_ratio(2000.0, truth), 10.0);
}

TEST(Jaccard, Examples) {
  const MealIntervalSet a{{100, 200}}, b{{150, 250}}, far{{500, 600}};
  EXPECT_DOUBLE_EQ(jaccard_index(a, a), 1.0);
  EXPECT_DOUBLE_EQ(jaccard_index(a, far), 0.0);
  EXPECT_NEAR(jaccard_index(a, b), 50.0 / 150.0, 1e-12);
  EXPECT_DOUBLE_EQ(jaccard_index({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard_index(a, {}), 0.0);
}

TEST(Jaccard, SymmetricAndBounded) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.0, 300.0);
  for (int trial = 0; trial < 100; ++trial) {
    MealIntervalSet a, b;
    for (auto* set : {&a, &b}) {
      double t = u(rng);
      for (int i = 0; i < 3; ++i) {
        const double s = t + u(rng);
        const double e = s + 1.0 + u(rng);
        set->push_back({s, e});
        t = e;
      }
    }
    const double j = jaccard_index(a, b);
    EXPECT_NEAR(j, jaccard_index(b, a), 1e-12);
    EXPECT_GE(j, 0.0);
    EXPECT_LE(j, 1.0);
  }
}

TEST(MealReport, Consistency) {
  const MealConfusion c{50, 50, 50, 850};
  const auto r = make_meal_report(c, {50.0, 150.0}, 10.0);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.f1, 0.5);
  EXPECT_DOUBLE_EQ(r.specificity, 850.0 / 900.0);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.9);
  EXPECT_NEAR(r.jaccard, 1.0 / 3.0, 1e-12);
}

TEST(WristMotionEnergy, Constants) {
  const ImuRecording ones(std::vector<ImuSample>(500, {1, -1, 1, 5, 5, 5}), 100.0, Hand::Right);
  for (double e : wrist_motion_energy(ones, 1.0)) EXPECT_NEAR(e, 3.0, 1e-12);
  const ImuRecording zeros(std::vector<ImuSample>(500, {0, 0, 0, 5, 5, 5}), 100.0, Hand::Right);
  for (double e : wrist_motion_energy(zeros, 1.0)) EXPECT_EQ(e, 0.0);
}

TEST(WristMotionEnergy, MatchesBruteForce) {
  std::mt19937_64 rng(53);
  const auto rec = oracle::random_recording(rng, 5000);
  const auto want = oracle::motion_energy(rec, 200);
  EXPECT_LT(oracle::max_rel_error(wrist_motion_energy(rec, 2.0), want), 1e-10);
  EXPECT_LT(oracle::max_rel_error(serial::wrist_motion_energy(rec, 2.0), want), 1e-10);
}

TEST(WristMotionEnergy, OddWindowIsAnError) {
  const ImuRecording rec(std::vector<ImuSample>(100, ImuSample{}), 100.0, Hand::Right);
  EXPECT_THROW(wrist_motion_energy(rec, 0.05), Error);
}
