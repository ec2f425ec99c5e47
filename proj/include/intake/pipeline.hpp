#pragma once

// End-to-end glue: raw recording -> bite probabilities -> bites -> meals,
// and training pools built from a LOSO manifest.

#include <memory>
#include <string>
#include <vector>

#include "intake/bite_detect.hpp"
#include "intake/evaluate.hpp"
#include "intake/imu.hpp"
#include "intake/io.hpp"
#include "intake/meal_localize.hpp"
#include "intake/net/params.hpp"
#include "intake/net/train.hpp"
#include "intake/windowing.hpp"

namespace intake {

/// Mirrors a left-wrist recording into the right-wrist frame and applies the
/// preprocessing filters. The default config is scaled to the recording rate.
ImuRecording prepare_recording(const ImuRecording& raw);
ImuRecording prepare_recording(const ImuRecording& raw, const PreprocessConfig& cfg);

/// Per-step bite probabilities (one every 4 samples) of an already
/// prepared recording.
std::vector<double> predict_probabilities(const net::ModelParams& params, const ImuRecording& prepared);

BiteSet detect_recording_bites(const net::ModelParams& params, const ImuRecording& raw,
                               const BiteDetectConfig& cfg = {});

struct Session {
  ManifestEntry entry;
  std::shared_ptr<const ImuRecording> prepared;
  Events events;
};

std::vector<Session> load_sessions(const std::vector<ManifestEntry>& manifest);
Session make_session(ManifestEntry entry, const ImuRecording& raw, Events events);

/// Distinct subject ids in first-seen order.
std::vector<std::string> subjects_of(const std::vector<Session>& sessions);

/// Training windows from every session whose subject is not `held_out`
/// (pass an empty string to use all of them).
WindowPool build_pool(const std::vector<Session>& sessions, const std::string& held_out = {});

struct LosoConfig {
  net::NetConfig net;
  net::TrainConfig train;
  bool augment = true;
  std::size_t max_negatives = 0;  // 0 keeps every negative window
  std::uint64_t init_seed = 0;
  BiteDetectConfig bite;
  LocalizerConfig meal;
  double resolution_s = 1.0;
};

net::TrainResult train_model(const std::vector<Session>& sessions, const std::string& held_out,
                             const LosoConfig& cfg, const net::EpochCallback& on_epoch = {});

/// Bite metrics over the subject's in-meal sessions and meal metrics over
/// its free-living sessions.
struct FoldResult {
  std::string subject;
  BiteConfusion bites;
  MealConfusion meals;
  Overlap overlap;
  double free_living_s = 0.0;
  double meal_s = 0.0;  // annotated meal time inside free_living_s
  std::vector<double> epoch_loss;
};

FoldResult evaluate_subject(const net::ModelParams& params, const std::vector<Session>& sessions,
                            const std::string& subject, const LosoConfig& cfg);

/// Pooled totals of several folds.
FoldResult pool_folds(const std::vector<FoldResult>& folds);

}  // namespace intake
