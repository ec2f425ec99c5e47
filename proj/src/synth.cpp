#include "intake/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "intake/error.hpp"

namespace intake::synth {

namespace {

constexpr double kPi = std::numbers::pi;

void add_gesture(std::vector<ImuSample>& samples, double fs, double start_s, double width_s, double scale,
                 const BiteTemplate& tpl, bool with_roll) {
  const auto first = static_cast<std::ptrdiff_t>(std::ceil(start_s * fs));
  const auto last = static_cast<std::ptrdiff_t>(std::floor((start_s + width_s) * fs));
  for (std::ptrdiff_t n = std::max<std::ptrdiff_t>(first, 0);
       n <= last && n < static_cast<std::ptrdiff_t>(samples.size()); ++n) {
    ImuSample v = bite_shape(tpl, static_cast<double>(n) / fs - start_s, width_s);
    if (!with_roll) v[kGx] = 0.0;
    for (std::size_t c = 0; c < kChannels; ++c) samples[static_cast<std::size_t>(n)][c] += scale * v[c];
  }
}

}  // namespace

ImuSample bite_shape(const BiteTemplate& tpl, double tau, double width_s) {
  ImuSample v{};
  if (tau < 0.0 || tau > width_s) return v;
  const double u = tau / width_s;
  const double env = 0.5 * (1.0 - std::cos(2.0 * kPi * u));
  const double ph = 2.0 * kPi * tpl.accel_freq_hz * tau;
  const auto& a = tpl.amplitude;
  v[kAx] = a[kAx] * env * std::sin(ph);
  v[kAy] = a[kAy] * env * std::sin(ph + kPi / 3.0);
  v[kAz] = a[kAz] * env * std::sin(ph + 2.0 * kPi / 3.0);
  const double roll_start = width_s - tpl.roll_duration_s;
  if (tau >= roll_start) {
    const double x = (tau - roll_start) / tpl.roll_duration_s;
    v[kGx] = a[kGx] * std::sin(kPi * x) * std::sin(2.0 * kPi * x);
  }
  v[kGy] = a[kGy] * env * std::sin(2.0 * kPi * u);
  v[kGz] = a[kGz] * env * std::sin(0.5 * ph);
  return v;
}

void SynthSpec::validate() const {
  if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0))
    throw Error(Errc::invalid_argument, "duration and sample rate must be positive");
  const double widest = bite.width_mean_s + bite.width_jitter_s;
  if (!(bite.width_mean_s - bite.width_jitter_s > bite.roll_duration_s) || !(bite.roll_duration_s > 0.0))
    throw Error(Errc::invalid_argument, "bite widths must be positive and longer than the roll burst");
  for (std::size_t i = 0; i < meal_schedule.size(); ++i) {
    const auto& m = meal_schedule[i];
    if (!(m.start_s >= 0.0 && m.start_s < m.end_s))
      throw Error(Errc::invalid_argument, "meal start must precede its end");
    if (m.end_s > duration_s) throw Error(Errc::invalid_argument, "meal exceeds recording duration");
    if (i > 0 && m.start_s < meal_schedule[i - 1].end_s)
      throw Error(Errc::overlapping_intervals, "meals overlap or are unsorted");
    if (!(m.mean_inter_bite_s > widest + bite.min_pause_s))
      throw Error(Errc::invalid_argument, "inter-bite spacing must exceed the widest gesture plus the pause");
  }
  if (!(distractors_per_hour >= 0.0)) throw Error(Errc::invalid_argument, "distractor rate must be >= 0");
}

SynthRecording generate_recording(const SynthSpec& spec) {
  spec.validate();
  const double fs = spec.sample_rate_hz;
  const auto m = static_cast<std::size_t>(std::llround(spec.duration_s * fs));
  std::mt19937_64 rng(spec.seed);

  std::vector<ImuSample> samples(m);
  for (auto& s : samples) {
    for (std::size_t c = 0; c < kChannels; ++c) {
      std::normal_distribution<double> noise(0.0, spec.noise_std[c]);
      s[c] = noise(rng);
    }
    for (std::size_t c = 0; c < 3; ++c) s[c] += spec.gravity[c];
  }

  const auto& tpl = spec.bite;
  std::uniform_real_distribution<double> width_dist(tpl.width_mean_s - tpl.width_jitter_s,
                                                    tpl.width_mean_s + tpl.width_jitter_s);
  std::uniform_real_distribution<double> scale_dist(1.0 - tpl.amplitude_jitter, 1.0 + tpl.amplitude_jitter);

  SynthRecording out{ImuRecording({ImuSample{}}, fs, spec.handedness), {}, {}};
  for (const auto& meal : spec.meal_schedule) {
    out.meals.push_back({meal.start_s, meal.end_s});
    const auto slots = static_cast<std::size_t>(std::floor((meal.end_s - meal.start_s) / meal.mean_inter_bite_s));
    for (std::size_t k = 0; k < slots; ++k) {
      const double slot_start = meal.start_s + static_cast<double>(k) * meal.mean_inter_bite_s;
      const double width = width_dist(rng);
      std::uniform_real_distribution<double> offset(0.0, meal.mean_inter_bite_s - width - tpl.min_pause_s);
      const double start = slot_start + offset(rng);
      add_gesture(samples, fs, start, width, scale_dist(rng), tpl, true);
      out.bites.push_back({start, start + width});
    }
  }

  if (spec.distractors_per_hour > 0.0) {
    std::exponential_distribution<double> gap(spec.distractors_per_hour / 3600.0);
    const double margin = tpl.width_mean_s + tpl.width_jitter_s + 10.0;
    for (double t = gap(rng); t + margin < spec.duration_s; t += gap(rng)) {
      const bool near_meal = std::any_of(spec.meal_schedule.begin(), spec.meal_schedule.end(), [&](const MealPlan& mp) {
        return t + margin > mp.start_s && t - margin < mp.end_s;
      });
      const double width = width_dist(rng);
      const double scale = scale_dist(rng);
      if (!near_meal) add_gesture(samples, fs, t, width, scale, tpl, false);
    }
  }

  ImuRecording rec(std::move(samples), fs, Hand::Right, spec.units);
  if (spec.handedness == Hand::Left) rec = apply_mirror_transform(rec);
  out.recording = std::move(rec);
  return out;
}

std::vector<MealPlan> spread_meals(double duration_s, std::size_t count, double meal_s, double mean_inter_bite_s) {
  std::vector<MealPlan> plan;
  const double slot = duration_s / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double start = std::floor(static_cast<double>(i) * slot + (slot - meal_s) / 2.0);
    plan.push_back({start, start + meal_s, mean_inter_bite_s});
  }
  return plan;
}

void CorpusSpec::validate() const {
  if (subjects == 0) throw Error(Errc::invalid_argument, "corpus needs at least one subject");
  if (free_sessions > subjects) throw Error(Errc::invalid_argument, "more free-living sessions than subjects");
  if (free_meals > 0 && !(free_meal_s * static_cast<double>(free_meals) < free_session_s))
    throw Error(Errc::invalid_argument, "free-living meals do not fit the session");
}

std::vector<CorpusSession> generate_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<CorpusSession> out;
  for (std::size_t s = 0; s < spec.subjects; ++s) {
    const std::string subject = "s" + std::to_string(s + 1);
    BiteTemplate tpl;
    tpl.width_mean_s += spec.subject_width_spread_s * unit(rng);
    const double gain = 1.0 + spec.subject_amplitude_spread * unit(rng);
    for (auto& a : tpl.amplitude) a *= gain;
    const Hand hand = s % 2 == 1 ? Hand::Left : Hand::Right;

    auto base = [&](double duration) {
      SynthSpec ss;
      ss.duration_s = duration;
      ss.sample_rate_hz = spec.sample_rate_hz;
      ss.bite = tpl;
      ss.handedness = hand;
      ss.seed = rng();
      return ss;
    };
    for (std::size_t m = 0; m < spec.meals_per_subject; ++m) {
      SynthSpec ss = base(spec.meal_session_s);
      ss.meal_schedule = {{0.0, spec.meal_session_s, spec.mean_inter_bite_s}};
      out.push_back({subject, false, generate_recording(ss)});
    }
    if (s < spec.free_sessions) {
      SynthSpec ss = base(spec.free_session_s);
      ss.meal_schedule = spread_meals(spec.free_session_s, spec.free_meals, spec.free_meal_s, spec.mean_inter_bite_s);
      ss.distractors_per_hour = spec.distractors_per_hour;
      out.push_back({subject, true, generate_recording(ss)});
    }
  }
  return out;
}

}  // namespace intake::synth
