#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "intake/imu.hpp"
#include "intake/windowing.hpp"

namespace intake::synth {

struct MealPlan {
  double start_s;
  double end_s;
  double mean_inter_bite_s;  // bite start-to-start spacing
};

/// Shape of one planted intake gesture. Accelerometer channels oscillate at
/// accel_freq_hz under a raised-cosine envelope spanning the gesture; gy is
/// a slow lift-and-return lobe; gx carries a roll burst in the final
/// roll_duration_s, marking the end of the gesture.
struct BiteTemplate {
  std::array<double, kChannels> amplitude{0.25, 0.2, 0.15, 2.0, 1.0, 0.5};
  double width_mean_s = 4.52;
  double width_jitter_s = 0.5;       // widths ~ U(mean - jitter, mean + jitter)
  double amplitude_jitter = 0.15;    // per-bite scale ~ U(1 - j, 1 + j)
  double accel_freq_hz = 1.5;
  double roll_duration_s = 0.8;
  double min_pause_s = 0.5;          // minimum gap between consecutive gestures
};

/// Gesture value at time tau seconds into a gesture of width_s, unit scale.
ImuSample bite_shape(const BiteTemplate& tpl, double tau, double width_s);

struct SynthSpec {
  double duration_s = 600.0;
  double sample_rate_hz = 100.0;
  std::vector<MealPlan> meal_schedule;
  BiteTemplate bite;
  std::array<double, kChannels> noise_std{0.02, 0.02, 0.02, 0.05, 0.05, 0.05};
  std::array<double, 3> gravity{0.0, 0.0, 1.0};
  Hand handedness = Hand::Right;
  std::string units = "g;rad/s";
  /// Non-eating arm movements outside meals (gestures without the roll
  /// burst), per hour. Zero gives a quiet baseline.
  double distractors_per_hour = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthRecording {
  ImuRecording recording;
  std::vector<BiteAnnotation> bites;
  std::vector<MealAnnotation> meals;
};

/// Deterministic for a given spec. Each meal gets
/// floor((end - start) / mean_inter_bite_s) gestures, one per slot of that
/// width, placed at a random offset inside its slot. Left-handed specs are
/// generated in the right-wrist frame and then mirrored.
SynthRecording generate_recording(const SynthSpec& spec);

/// Evenly spread meal schedule helper: `count` meals of `meal_s` seconds.
std::vector<MealPlan> spread_meals(double duration_s, std::size_t count, double meal_s, double mean_inter_bite_s);

/// A multi-subject corpus: every subject gets `meals_per_subject` in-meal
/// sessions (the whole recording is one meal); the first `free_sessions`
/// subjects additionally get one long free-living session with
/// `free_meals` meals. Subjects differ in gesture width, amplitude and
/// handedness (odd-numbered subjects wear the watch on the left).
struct CorpusSpec {
  std::size_t subjects = 5;
  std::size_t meals_per_subject = 4;
  double meal_session_s = 480.0;
  double mean_inter_bite_s = 9.0;
  std::size_t free_sessions = 4;
  double free_session_s = 3.0 * 3600.0;
  std::size_t free_meals = 2;
  double free_meal_s = 1200.0;
  double distractors_per_hour = 40.0;
  double subject_width_spread_s = 0.3;
  double subject_amplitude_spread = 0.15;
  double sample_rate_hz = 100.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CorpusSession {
  std::string subject;
  bool free_living;
  SynthRecording data;
};

std::vector<CorpusSession> generate_corpus(const CorpusSpec& spec);

}  // namespace intake::synth
