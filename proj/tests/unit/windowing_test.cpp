#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "intake/error.hpp"
#include "intake/windowing.hpp"
#include "oracles.hpp"

using namespace intake;

namespace {

double triple_norm(std::span<const double> r, std::size_t first) {
  return std::sqrt(r[first] * r[first] + r[first + 1] * r[first + 1] + r[first + 2] * r[first + 2]);
}

}  // namespace

TEST(SlideWindows, CountsAndEndTimes) {
  std::mt19937_64 rng(20);
  const auto rec = oracle::random_recording(rng, 1000);
  const auto w = slide_windows(rec, {5.0, 1.0, 0.1});
  ASSERT_EQ(w.size(), 6u);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_DOUBLE_EQ(w[i].second, 5.0 + static_cast<double>(i));
    EXPECT_EQ(w[i].first.rows(), 500u);
    EXPECT_EQ(w[i].first.cols(), 6u);
  }
  EXPECT_EQ(w[2].first(0, kAy), rec[200][kAy]);
}

TEST(SlideWindows, BoundaryLengths) {
  std::mt19937_64 rng(21);
  EXPECT_EQ(slide_windows(oracle::random_recording(rng, 500), {}).size(), 1u);
  EXPECT_TRUE(slide_windows(oracle::random_recording(rng, 499), {}).empty());
}

TEST(AssignLabel, BiteEndWithinEpsilon) {
  const std::vector<BiteAnnotation> bites{{6.0, 10.0}, {20.0, 24.0}};
  const auto cfg = WindowConfig::in_meal();
  EXPECT_EQ(assign_label(10.05, bites, cfg), Label::Positive);
  EXPECT_EQ(assign_label(10.1, bites, cfg), Label::Positive);
  EXPECT_EQ(assign_label(9.9, bites, cfg), Label::Positive);
  EXPECT_EQ(assign_label(10.20, bites, cfg), Label::Negative);
  EXPECT_EQ(assign_label(15.0, bites, cfg), Label::Negative);
}

TEST(AssignLabel, FreeLivingInsideMealIsNotApplicable) {
  const std::vector<MealAnnotation> meals{{4800.0, 5400.0}};
  EXPECT_EQ(assign_label(5000.0, meals), Label::NotApplicable);
  EXPECT_EQ(assign_label(4800.0, meals), Label::NotApplicable);
  EXPECT_EQ(assign_label(4799.0, meals), Label::Negative);
  EXPECT_EQ(assign_label(5401.0, meals), Label::Negative);
}

TEST(WindowPool, StoredLabelsMatchRightEdgeRule) {
  std::mt19937_64 rng(22);
  auto rec = std::make_shared<const ImuRecording>(oracle::random_recording(rng, 3000));
  const std::vector<BiteAnnotation> bites{{3.0, 7.5}, {9.0, 12.02}, {20.0, 24.4}};
  const auto cfg = WindowConfig::in_meal();
  WindowPool pool;
  pool.add_in_meal(rec, bites, cfg);
  ASSERT_EQ(pool.size(), window_positions(3000, 100.0, cfg).size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    EXPECT_EQ(pool.label(i), assign_label(pool.end_time_s(i), bites, cfg));
    positives += pool.label(i) == Label::Positive;
  }
  // every bite end is covered by the windows ending within +-0.1 s of it
  EXPECT_GE(positives, 3u * 4u);
  const auto f = pool.frame(10);
  const std::size_t first = static_cast<std::size_t>(std::llround(pool.end_time_s(10) * 100.0)) - 500;
  EXPECT_EQ(f(0, kGz), (*rec)[first][kGz]);
}

TEST(WindowPool, FreeLivingDropsMealWindows) {
  std::mt19937_64 rng(23);
  auto rec = std::make_shared<const ImuRecording>(oracle::random_recording(rng, 6000));
  const std::vector<MealAnnotation> meals{{20.0, 40.0}};
  WindowPool pool;
  pool.add_free_living(rec, meals, WindowConfig::free_living());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    EXPECT_EQ(pool.label(i), Label::Negative);
    EXPECT_FALSE(pool.end_time_s(i) >= 20.0 && pool.end_time_s(i) <= 40.0);
  }
  EXPECT_EQ(pool.size(), 56u - 21u);
}

TEST(Rotation, IdentityWhenAnglesAreZero) {
  std::mt19937_64 rng(24);
  const auto frame = oracle::random_recording(rng, 20).as_matrix();
  for (auto order : {RotationOrder::X, RotationOrder::Z, RotationOrder::XZ, RotationOrder::ZX})
    EXPECT_EQ(apply_rotation(frame, rotation_matrix({0.0, 0.0, order})), frame);
}

TEST(Rotation, NinetyDegreesAboutZ) {
  Matrix<double> frame(1, 6, std::vector<double>{1, 0, 0, 0, 0, 1});
  const auto out = apply_rotation(frame, rotation_matrix({0.0, 90.0, RotationOrder::Z}));
  const std::vector<double> want{0, 1, 0, 0, 0, 1};
  for (std::size_t c = 0; c < 6; ++c) EXPECT_NEAR(out(0, c), want[c], 1e-15);
}

TEST(Rotation, ExplicitMatrixOracle) {
  const double t = 30.0 * std::acos(-1.0) / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  const double qx[3][3] = {{1, 0, 0}, {0, c, -s}, {0, s, c}};
  Matrix<double> frame(1, 6, std::vector<double>{0.3, -0.7, 1.1, 2.0, 0.5, -1.0});
  const auto out = apply_rotation(frame, rotation_x(30.0));
  for (std::size_t b = 0; b < 6; b += 3)
    for (std::size_t i = 0; i < 3; ++i) {
      double want = 0.0;
      for (std::size_t j = 0; j < 3; ++j) want += qx[i][j] * frame(0, b + j);
      EXPECT_NEAR(out(0, b + i), want, 1e-15);
    }
}

TEST(Rotation, AugmentPreservesTripleNormsAndNeverTouchesY) {
  std::mt19937_64 rng(25);
  const auto frame = oracle::random_recording(rng, 50).as_matrix();
  std::size_t rotated = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto out = rotation_augment(frame, rng);
    rotated += !(out == frame);
    for (std::size_t r = 0; r < frame.rows(); ++r) {
      EXPECT_NEAR(triple_norm(out.row(r), 0), triple_norm(frame.row(r), 0), 1e-12);
      EXPECT_NEAR(triple_norm(out.row(r), 3), triple_norm(frame.row(r), 3), 1e-12);
    }
  }
  EXPECT_GT(rotated, 60u);
  EXPECT_LT(rotated, 140u);

  // a rotation about y would move (1, 0, 1) while keeping its y component at 0
  Matrix<double> xz(1, 6, std::vector<double>{1, 0, 1, 1, 0, 1});
  for (int trial = 0; trial < 200; ++trial) {
    const auto out = rotation_augment(xz, rng);
    if (out == xz) continue;
    EXPECT_GT(std::abs(out(0, kAy)), 1e-9);
    EXPECT_GT(std::abs(out(0, kGy)), 1e-9);
  }
}

TEST(BalancedBatches, ExactBalance) {
  std::mt19937_64 rng(26);
  std::vector<Label> labels;
  for (int i = 0; i < 300; ++i) labels.push_back(Label::Positive);
  for (int i = 0; i < 5000; ++i) labels.push_back(Label::Negative);
  const auto batches = make_balanced_batches(labels, 128, rng);
  EXPECT_EQ(batches.size(), (5000u + 63u) / 64u);
  std::vector<int> neg_seen(labels.size(), 0);
  for (const auto& b : batches) {
    ASSERT_EQ(b.size(), 128u);
    std::size_t pos = 0;
    for (auto i : b) {
      pos += labels[i] == Label::Positive;
      if (labels[i] == Label::Negative) ++neg_seen[i];
    }
    EXPECT_EQ(pos, 64u);
  }
  for (std::size_t i = 300; i < labels.size(); ++i) EXPECT_GE(neg_seen[i], 1) << i;
}

TEST(BalancedBatches, SmallPool) {
  std::mt19937_64 rng(27);
  std::vector<Label> labels(10, Label::Positive);
  labels.resize(20, Label::Negative);
  EXPECT_EQ(make_balanced_batches(labels, 4, rng).size(), 5u);
}

TEST(BalancedBatches, Errors) {
  std::mt19937_64 rng(28);
  std::vector<Label> labels{Label::Positive, Label::Negative};
  EXPECT_THROW(make_balanced_batches(labels, 3, rng), Error);
  labels.push_back(Label::NotApplicable);
  EXPECT_THROW(make_balanced_batches(labels, 2, rng), Error);
  EXPECT_THROW(make_balanced_batches(std::vector<Label>{Label::Negative}, 2, rng), Error);
}

TEST(WindowPool, SubsampleKeepsPositives) {
  std::mt19937_64 rng(29);
  auto rec = std::make_shared<const ImuRecording>(oracle::random_recording(rng, 4000));
  const std::vector<BiteAnnotation> bites{{3.0, 8.0}, {12.0, 17.0}, {25.0, 30.0}};
  WindowPool pool;
  pool.add_in_meal(rec, bites, WindowConfig::in_meal());
  const auto small = pool.subsample_negatives(50, rng);
  EXPECT_EQ(small.count(Label::Positive), pool.count(Label::Positive));
  EXPECT_EQ(small.count(Label::Negative), 50u);
}
