#include "intake/pipeline.hpp"

#include <algorithm>
#include <random>

#include "intake/error.hpp"
#include "intake/net/network.hpp"

namespace intake {

ImuRecording prepare_recording(const ImuRecording& raw) {
  return prepare_recording(raw, PreprocessConfig::for_rate(raw.sample_rate_hz()));
}

ImuRecording prepare_recording(const ImuRecording& raw, const PreprocessConfig& cfg) {
  return preprocess(mirror_hand(raw), cfg);
}

std::vector<double> predict_probabilities(const net::ModelParams& params, const ImuRecording& prepared) {
  const auto probs = net::forward_sequence(params, prepared.as_matrix().cast<float>());
  return {probs.begin(), probs.end()};
}

BiteSet detect_recording_bites(const net::ModelParams& params, const ImuRecording& raw,
                               const BiteDetectConfig& cfg) {
  const auto p = predict_probabilities(params, prepare_recording(raw));
  return detect_bites(p, raw.sample_rate_hz(), cfg);
}

std::vector<Session> load_sessions(const std::vector<ManifestEntry>& manifest) {
  std::vector<Session> out;
  out.reserve(manifest.size());
  for (const auto& e : manifest) {
    auto rec = std::make_shared<const ImuRecording>(prepare_recording(load_recording(e.recording)));
    out.push_back({e, std::move(rec), load_events(e.events)});
  }
  return out;
}

Session make_session(ManifestEntry entry, const ImuRecording& raw, Events events) {
  return {std::move(entry), std::make_shared<const ImuRecording>(prepare_recording(raw)), std::move(events)};
}

std::vector<std::string> subjects_of(const std::vector<Session>& sessions) {
  std::vector<std::string> out;
  for (const auto& s : sessions)
    if (std::find(out.begin(), out.end(), s.entry.subject) == out.end()) out.push_back(s.entry.subject);
  return out;
}

WindowPool build_pool(const std::vector<Session>& sessions, const std::string& held_out) {
  WindowPool pool;
  for (const auto& s : sessions) {
    if (!held_out.empty() && s.entry.subject == held_out) continue;
    if (s.entry.kind == ManifestEntry::Kind::Meal) {
      const auto bites = s.events.bite_intervals();
      pool.add_in_meal(s.prepared, bites, WindowConfig::in_meal());
    } else {
      const auto meals = s.events.meals();
      pool.add_free_living(s.prepared, meals, WindowConfig::free_living());
    }
  }
  return pool;
}

net::TrainResult train_model(const std::vector<Session>& sessions, const std::string& held_out,
                             const LosoConfig& cfg, const net::EpochCallback& on_epoch) {
  WindowPool pool = build_pool(sessions, held_out);
  if (cfg.max_negatives > 0) {
    std::mt19937_64 rng(cfg.train.seed ^ 0x9e3779b97f4a7c15ULL);
    pool = pool.subsample_negatives(cfg.max_negatives, rng);
  }
  return net::train(net::init_params(cfg.net, cfg.init_seed), pool, cfg.train, cfg.augment, on_epoch);
}

FoldResult evaluate_subject(const net::ModelParams& params, const std::vector<Session>& sessions,
                            const std::string& subject, const LosoConfig& cfg) {
  FoldResult r;
  r.subject = subject;
  for (const auto& s : sessions) {
    if (s.entry.subject != subject) continue;
    const double fs = s.prepared->sample_rate_hz();
    const auto bites = detect_bites(predict_probabilities(params, *s.prepared), fs, cfg.bite);
    if (s.entry.kind == ManifestEntry::Kind::Meal) {
      r.bites += match_bites(bites, s.events.bite_intervals());
    } else {
      const double duration = s.prepared->duration_s();
      const auto est = localize_meals(bites, duration, fs, cfg.meal);
      const auto truth = s.events.meal_intervals();
      r.meals += meal_confusion(est, truth, duration, cfg.resolution_s);
      r.overlap += interval_overlap(est, truth);
      r.free_living_s += duration;
      for (const auto& m : truth) r.meal_s += m.duration();
    }
  }
  return r;
}

FoldResult pool_folds(const std::vector<FoldResult>& folds) {
  FoldResult all;
  all.subject = "all";
  for (const auto& f : folds) {
    all.bites += f.bites;
    all.meals += f.meals;
    all.overlap += f.overlap;
    all.free_living_s += f.free_living_s;
    all.meal_s += f.meal_s;
  }
  return all;
}

}  // namespace intake
