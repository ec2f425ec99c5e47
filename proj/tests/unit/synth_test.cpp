#include <gtest/gtest.h>

#include <cmath>

#include "intake/bite_detect.hpp"
#include "intake/error.hpp"
#include "intake/synth.hpp"

using namespace intake;
using namespace intake::synth;

TEST(Synth, NoMealsMeansGravityAndNoise) {
  SynthSpec spec;
  spec.duration_s = 300.0;
  spec.seed = 1;
  const auto r = generate_recording(spec);
  EXPECT_TRUE(r.bites.empty());
  EXPECT_TRUE(r.meals.empty());
  const double m = static_cast<double>(r.recording.size());
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0;
    for (double v : r.recording.channel(c)) mean += v;
    mean /= m;
    EXPECT_NEAR(mean, spec.gravity[c], 3.0 * spec.noise_std[c] / std::sqrt(m));
  }
}

TEST(Synth, BiteCountsAndAnnotationConsistency) {
  SynthSpec spec;
  spec.duration_s = 1200.0;
  spec.meal_schedule = {{100.0, 300.0, 10.0}, {600.0, 800.0, 10.0}};
  spec.seed = 2;
  const auto r = generate_recording(spec);
  ASSERT_EQ(r.bites.size(), 40u);
  ASSERT_EQ(r.meals.size(), 2u);
  for (std::size_t i = 0; i < r.bites.size(); ++i) {
    const auto& b = r.bites[i];
    const auto inside = std::count_if(r.meals.begin(), r.meals.end(), [&](const MealAnnotation& m) {
      return b.start_s >= m.start_s && b.end_s <= m.end_s;
    });
    EXPECT_EQ(inside, 1);
    const double w = b.end_s - b.start_s;
    EXPECT_GE(w, spec.bite.width_mean_s - spec.bite.width_jitter_s);
    EXPECT_LE(w, spec.bite.width_mean_s + spec.bite.width_jitter_s);
    if (i > 0) {
      EXPECT_GE(b.start_s - r.bites[i - 1].end_s, spec.bite.min_pause_s - 1e-9);
    }
  }
}

TEST(Synth, SameSeedIsBitwiseIdentical) {
  SynthSpec spec;
  spec.duration_s = 600.0;
  spec.meal_schedule = {{100.0, 400.0, 12.0}};
  spec.distractors_per_hour = 60.0;
  spec.seed = 3;
  const auto a = generate_recording(spec);
  const auto b = generate_recording(spec);
  EXPECT_EQ(a.recording, b.recording);
  EXPECT_EQ(a.bites, b.bites);
  spec.seed = 4;
  EXPECT_FALSE(generate_recording(spec).recording == a.recording);
}

TEST(Synth, LeftHandedIsMirrored) {
  SynthSpec spec;
  spec.duration_s = 100.0;
  spec.meal_schedule = {{10.0, 90.0, 10.0}};
  spec.seed = 5;
  const auto right = generate_recording(spec);
  spec.handedness = Hand::Left;
  const auto left = generate_recording(spec);
  EXPECT_EQ(left.recording.handedness(), Hand::Left);
  EXPECT_EQ(mirror_hand(left.recording), right.recording);
}

TEST(Synth, InvalidSpecs) {
  SynthSpec spec;
  spec.duration_s = 100.0;
  spec.meal_schedule = {{50.0, 150.0, 10.0}};
  EXPECT_THROW(generate_recording(spec), Error);
  spec.meal_schedule = {{10.0, 50.0, 10.0}, {40.0, 90.0, 10.0}};
  EXPECT_THROW(generate_recording(spec), Error);
  spec.meal_schedule = {{10.0, 50.0, 4.0}};
  EXPECT_THROW(generate_recording(spec), Error);
}

TEST(Synth, MatchedFilterRecoversPlantedBites) {
  SynthSpec spec;
  spec.duration_s = 1800.0;
  spec.meal_schedule = spread_meals(1800.0, 2, 600.0, 12.0);
  spec.noise_std = {0.02, 0.02, 0.015, 0.2, 0.1, 0.05};  // 0.1 x amplitude
  spec.seed = 6;
  const auto r = generate_recording(spec);

  // correlate gx with the roll burst that closes every gesture
  const double fs = spec.sample_rate_hz;
  const auto len = static_cast<std::size_t>(spec.bite.roll_duration_s * fs);
  std::vector<double> tpl(len);
  double energy = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(len);
    tpl[k] = std::sin(std::acos(-1.0) * x) * std::sin(2.0 * std::acos(-1.0) * x);
    energy += tpl[k] * tpl[k];
  }
  const auto gx = r.recording.channel(kGx);
  std::vector<double> score(gx.size(), 0.0);
  for (std::size_t n = 0; n + len <= gx.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < len; ++k) acc += gx[n + k] * tpl[k];
    score[n] = acc / (energy * spec.bite.amplitude[kGx]);
  }
  const auto peaks = select_peaks(score, 0.5, 2.0 * fs);

  std::size_t found = 0;
  for (const auto& b : r.bites) {
    const double roll_start = b.end_s - spec.bite.roll_duration_s;
    found += std::any_of(peaks.begin(), peaks.end(),
                         [&](std::size_t n) { return std::abs(static_cast<double>(n) / fs - roll_start) < 0.2; });
  }
  EXPECT_GE(static_cast<double>(found), 0.95 * static_cast<double>(r.bites.size()));
  EXPECT_LE(peaks.size(), r.bites.size() + 2);
}
