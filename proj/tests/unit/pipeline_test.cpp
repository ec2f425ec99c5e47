#include <gtest/gtest.h>

#include <filesystem>

#include "intake/io.hpp"
#include "intake/net/params.hpp"
#include "intake/pipeline.hpp"
#include "intake/synth.hpp"

using namespace intake;
namespace fs = std::filesystem;

TEST(Pipeline, PrepareMirrorsLeftRecordings) {
  synth::SynthSpec spec;
  spec.duration_s = 60.0;
  spec.seed = 1;
  const auto right = synth::generate_recording(spec).recording;
  spec.handedness = Hand::Left;
  const auto left = synth::generate_recording(spec).recording;
  EXPECT_EQ(prepare_recording(left), prepare_recording(right));
}

TEST(Pipeline, ProbabilitiesOnePerFourSamples) {
  synth::SynthSpec spec;
  spec.duration_s = 30.0;
  const auto rec = prepare_recording(synth::generate_recording(spec).recording);
  const auto p = predict_probabilities(net::init_params(net::NetConfig::reduced({4, 4, 4}, 4), 1), rec);
  EXPECT_EQ(p.size(), rec.size() / 4);
}

TEST(Pipeline, SessionsAndPool) {
  const auto dir = fs::temp_directory_path() / "intake_pipeline_test";
  fs::create_directories(dir);
  std::vector<ManifestEntry> manifest;
  for (int s = 0; s < 2; ++s) {
    synth::SynthSpec meal;
    meal.duration_s = 120.0;
    meal.meal_schedule = {{0.0, 120.0, 10.0}};
    meal.seed = static_cast<std::uint64_t>(s);
    const auto r = synth::generate_recording(meal);
    const std::string base = "s" + std::to_string(s);
    write_recording(dir / (base + ".csv"), r.recording);
    write_events(dir / (base + ".jsonl"), Events::from(r.bites, {}));
    manifest.push_back({base, ManifestEntry::Kind::Meal, dir / (base + ".csv"), dir / (base + ".jsonl")});
  }
  synth::SynthSpec day;
  day.duration_s = 600.0;
  day.meal_schedule = {{200.0, 300.0, 10.0}};
  const auto d = synth::generate_recording(day);
  write_recording(dir / "day.csv", d.recording);
  write_events(dir / "day.jsonl", Events::from(d.bites, d.meals));
  manifest.push_back({"s0", ManifestEntry::Kind::FreeLiving, dir / "day.csv", dir / "day.jsonl"});

  const auto sessions = load_sessions(manifest);
  ASSERT_EQ(sessions.size(), 3u);
  const auto all = build_pool(sessions);
  const auto held = build_pool(sessions, "s0");
  EXPECT_GT(all.count(Label::Positive), 0u);
  EXPECT_EQ(held.size(), window_positions(12000, 100.0, WindowConfig::in_meal()).size());
  // free-living windows inside the meal are dropped
  EXPECT_EQ(all.size() - 2 * held.size(), 596u - 101u);
  fs::remove_all(dir);
}
