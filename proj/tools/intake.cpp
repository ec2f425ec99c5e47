// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "intake/error.hpp"
#include "intake/evaluate.hpp"
#include "intake/io.hpp"
#include "intake/meal_localize.hpp"
#include "intake/net/serialize.hpp"
#include "intake/parallel.hpp"
#include "intake/pipeline.hpp"
#include "intake/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace intake;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;

// Thrown for option combinations CLI11 cannot check by itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Cfg>
void check(const Cfg& cfg) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

struct NetOptions {
  std::vector<std::size_t> filters{32, 64, 128};
  std::size_t lstm = 128;
  double dropout = 0.5;

  void add(CLI::App* app) {
    app->add_option("--filters", filters, "conv filters per layer")->delimiter(',')->expected(3);
    app->add_option("--lstm-units", lstm, "LSTM cells");
    app->add_option("--dropout", dropout, "dropout rate on the dense input");
  }
  net::NetConfig config() const {
    auto cfg = net::NetConfig::reduced(filters, lstm);
    cfg.dropout_rate = dropout;
    check(cfg);
    return cfg;
  }
};

struct TrainOptions {
  net::TrainConfig train;
  bool no_augment = false;
  std::size_t max_negatives = 0;

  void add(CLI::App* app) {
    app->add_option("--epochs", train.epochs, "training epochs");
    app->add_option("--batch-size", train.batch_size, "balanced batch size (even)");
    app->add_option("--learning-rate", train.learning_rate, "RMSProp learning rate");
    app->add_option("--seed", train.seed, "rng seed for init, batching and augmentation");
    app->add_option("--max-negatives", max_negatives, "subsample negative windows (0 keeps all)");
    app->add_flag("--no-augment", no_augment, "disable rotation augmentation");
  }
};

struct DetectOptions {
  BiteDetectConfig bite;
  LocalizerConfig meal;

  void add_bite(CLI::App* app) {
    app->add_option("--lambda-p", bite.lambda_p, "probability threshold");
    app->add_option("--min-gap", bite.min_gap_s, "minimum seconds between bites");
  }
  void add_meal(CLI::App* app) {
    app->add_option("--lambda-s", meal.lambda_s, "density threshold");
    app->add_option("--gauss-len", meal.gauss_len_s, "smoothing kernel length (s)");
    app->add_option("--gauss-std", meal.gauss_std_s, "smoothing kernel std (s)");
    app->add_option("--merge-gap", meal.merge_gap_s, "merge meals closer than this (s)");
    app->add_option("--min-duration", meal.min_duration_s, "reject meals shorter than this (s)");
  }
};

json to_json(const BiteConfusion& c, const PrecisionRecall& pr) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"precision", pr.precision}, {"recall", pr.recall}, {"f1", pr.f1}};
}

json to_json(const MealReport& r) {
  return {{"tp", r.confusion.tp},       {"fp", r.confusion.fp},
          {"fn", r.confusion.fn},       {"tn", r.confusion.tn},
          {"precision", r.precision},   {"recall", r.recall},
          {"specificity", r.specificity}, {"f1", r.f1},
          {"accuracy", r.accuracy},     {"weighted_accuracy", r.weighted_accuracy},
          {"jaccard", r.jaccard}};
}

void print_bite_table(const std::vector<std::pair<std::string, BiteConfusion>>& rows) {
  std::printf("%-10s %6s %6s %6s %9s %7s %6s\n", "subject", "TP", "FP", "FN", "precision", "recall", "F1");
  for (const auto& [name, c] : rows) {
    const auto pr = precision_recall_f1(c);
    std::printf("%-10s %6zu %6zu %6zu %9.3f %7.3f %6.3f\n", name.c_str(), c.tp, c.fp, c.fn, pr.precision, pr.recall,
                pr.f1);
  }
}

void print_meal_table(const std::vector<std::pair<std::string, MealReport>>& rows) {
  std::printf("%-10s %9s %7s %11s %6s %8s %8s %7s\n", "subject", "precision", "recall", "specificity", "F1",
              "accuracy", "w.acc", "Jaccard");
  for (const auto& [name, r] : rows)
    std::printf("%-10s %9.3f %7.3f %11.3f %6.3f %8.3f %8.3f %7.3f\n", name.c_str(), r.precision, r.recall,
                r.specificity, r.f1, r.accuracy, r.weighted_accuracy, r.jaccard);
}

MealReport report_for(const MealConfusion& c, const Overlap& o, double total_s, double meal_s) {
  const double ratio = meal_s > 0.0 ? duration_ratio(total_s, meal_s) : 1.0;
  return make_meal_report(c, o, ratio);
}

// ---------------------------------------------------------------------------

int run_preprocess(const fs::path& in, const fs::path& out) {
  write_recording(out, prepare_recording(load_recording(in)));
  return 0;
}

int run_train(const fs::path& manifest, const std::string& held_out, const fs::path& out, const NetOptions& no,
              const TrainOptions& to, bool as_json) {
  LosoConfig cfg;
  cfg.net = no.config();
  cfg.train = to.train;
  check(cfg.train);
  cfg.augment = !to.no_augment;
  cfg.max_negatives = to.max_negatives;
  cfg.init_seed = to.train.seed;
  const auto sessions = load_sessions(load_manifest(manifest));
  const auto result = train_model(sessions, held_out, cfg, [&](std::size_t epoch, double loss) {
    if (!as_json) std::fprintf(stderr, "epoch %zu: mean loss %.5f\n", epoch + 1, loss);
  });
  net::save_params(out, result.params);
  if (as_json) std::cout << json{{"weights", out.string()}, {"epoch_loss", result.epoch_loss}}.dump() << "\n";
  return 0;
}

int run_detect_bites(const fs::path& weights, const fs::path& in, const fs::path& out, const fs::path& probs_out,
                     const DetectOptions& d, bool as_json) {
  check(d.bite);
  const auto params = net::load_params(weights);
  const auto raw = load_recording(in);
  const auto probs = predict_probabilities(params, prepare_recording(raw));
  const auto bites = detect_bites(probs, raw.sample_rate_hz(), d.bite);
  write_events(out, Events::from(bites));
  if (!probs_out.empty()) {
    std::string text = "t,p\n";
    char buf[64];
    for (std::size_t n = 0; n < probs.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%.6f,%.9g\n", static_cast<double>(n) * 4.0 / raw.sample_rate_hz(), probs[n]);
      text += buf;
    }
    write_file_atomic(probs_out, text);
  }
  if (as_json) std::cout << json{{"bites", bites.size()}, {"timestamps_s", bites.timestamps_s}}.dump() << "\n";
  else std::printf("%zu bites written to %s\n", bites.size(), out.string().c_str());
  return 0;
}

int run_detect_meals(const fs::path& bites_path, const fs::path& recording, double duration, double fs_hz,
                     const std::string& method, const fs::path& out, const DetectOptions& d, bool as_json) {
  check(d.meal);
  if (!recording.empty()) {
    const auto rec = load_recording(recording);
    duration = rec.duration_s();
    fs_hz = rec.sample_rate_hz();
  }
  if (!(duration > 0.0)) throw UsageError("--duration or --recording is required");
  const auto bites = load_events(bites_path).bite_moments();
  const auto meals = method == "dbscan" ? dbscan_localize(bites, d.meal.merge_gap_s)
                                        : localize_meals(bites, duration, fs_hz, d.meal);
  write_events(out, Events::from(std::span<const Interval>(meals)));
  if (as_json) {
    json arr = json::array();
    for (const auto& m : meals) arr.push_back({{"start_s", m.start_s}, {"end_s", m.end_s}});
    std::cout << json{{"meals", arr}}.dump() << "\n";
  } else {
    for (const auto& m : meals) std::printf("meal %.2f - %.2f s (%.1f min)\n", m.start_s, m.end_s, m.duration() / 60.0);
  }
  return 0;
}

int run_evaluate_bites(const fs::path& det, const fs::path& truth, bool as_json) {
  const auto c = match_bites(load_events(det).bite_moments(), load_events(truth).bite_intervals());
  if (as_json) std::cout << to_json(c, precision_recall_f1(c)).dump() << "\n";
  else print_bite_table({{"session", c}});
  return 0;
}

int run_evaluate_meals(const fs::path& est_path, const fs::path& truth_path, double duration, double resolution,
                       bool as_json) {
  if (!(duration > 0.0)) throw UsageError("--duration must be positive");
  if (!(resolution > 0.0)) throw UsageError("--resolution must be positive");
  const auto est = load_events(est_path).meal_intervals();
  const auto truth = load_events(truth_path).meal_intervals();
  double meal_s = 0.0;
  for (const auto& m : truth) meal_s += m.duration();
  const auto r = report_for(meal_confusion(est, truth, duration, resolution), interval_overlap(est, truth), duration,
                            meal_s);
  if (as_json) std::cout << to_json(r).dump() << "\n";
  else print_meal_table({{"session", r}});
  return 0;
}

int run_synth(const fs::path& dir, const synth::CorpusSpec& spec) {
  check(spec);
  fs::create_directories(dir);
  std::vector<ManifestEntry> manifest;
  std::map<std::string, std::size_t> counts;
  for (const auto& s : synth::generate_corpus(spec)) {
    const std::string stem = s.subject + (s.free_living ? "_free_" : "_meal_");
    const std::string base = stem + std::to_string(counts[stem]++);
    write_recording(dir / (base + ".csv"), s.data.recording);
    write_events(dir / (base + ".jsonl"), Events::from(s.data.bites, s.data.meals));
    manifest.push_back({s.subject, s.free_living ? ManifestEntry::Kind::FreeLiving : ManifestEntry::Kind::Meal,
                        base + ".csv", base + ".jsonl"});
  }
  write_manifest(dir / "manifest.csv", manifest);
  std::printf("%zu sessions written to %s\n", manifest.size(), dir.string().c_str());
  return 0;
}

int run_loso(const fs::path& manifest, std::vector<std::string> subjects, const NetOptions& no, const TrainOptions& to,
             const DetectOptions& d, double resolution, bool as_json) {
  LosoConfig cfg;
  cfg.net = no.config();
  cfg.train = to.train;
  check(cfg.train);
  check(d.bite);
  check(d.meal);
  cfg.augment = !to.no_augment;
  cfg.max_negatives = to.max_negatives;
  cfg.init_seed = to.train.seed;
  cfg.bite = d.bite;
  cfg.meal = d.meal;
  cfg.resolution_s = resolution;

  const auto sessions = load_sessions(load_manifest(manifest));
  if (subjects.empty()) subjects = subjects_of(sessions);
  std::vector<FoldResult> folds;
  for (const auto& subject : subjects) {
    if (!as_json) std::fprintf(stderr, "fold %s\n", subject.c_str());
    const auto trained = train_model(sessions, subject, cfg, [&](std::size_t epoch, double loss) {
      if (!as_json) std::fprintf(stderr, "  epoch %zu: mean loss %.5f\n", epoch + 1, loss);
    });
    auto fold = evaluate_subject(trained.params, sessions, subject, cfg);
    fold.epoch_loss = trained.epoch_loss;
    folds.push_back(std::move(fold));
  }
  const auto all = pool_folds(folds);
  auto meal_report = [](const FoldResult& f) { return report_for(f.meals, f.overlap, f.free_living_s, f.meal_s); };

  if (as_json) {
    json out = json::array();
    for (const auto& f : folds)
      out.push_back({{"subject", f.subject},
                     {"bites", to_json(f.bites, precision_recall_f1(f.bites))},
                     {"meals", to_json(meal_report(f))},
                     {"epoch_loss", f.epoch_loss}});
    std::cout << json{{"folds", out},
                      {"pooled", {{"bites", to_json(all.bites, precision_recall_f1(all.bites))},
                                  {"meals", to_json(meal_report(all))}}}}
                     .dump()
              << "\n";
    return 0;
  }
  std::vector<std::pair<std::string, BiteConfusion>> bite_rows;
  std::vector<std::pair<std::string, MealReport>> meal_rows;
  for (const auto& f : folds) {
    bite_rows.emplace_back(f.subject, f.bites);
    if (f.free_living_s > 0.0) meal_rows.emplace_back(f.subject, meal_report(f));
  }
  bite_rows.emplace_back("pooled", all.bites);
  if (all.free_living_s > 0.0) meal_rows.emplace_back("pooled", meal_report(all));
  std::printf("Bite detection\n");
  print_bite_table(bite_rows);
  std::printf("\nMeal detection\n");
  print_meal_table(meal_rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bite and meal detection from wrist IMU recordings"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  int threads = 0;
  app.add_flag("--json", as_json, "machine-readable output on stdout");
  app.add_option("--threads", threads, "OpenMP threads (default: all)");

  fs::path in, out, weights, manifest, truth, recording, probs_out;
  std::string held_out, method = "edge";
  std::vector<std::string> subjects;
  double duration = 0.0, fs_hz = 100.0, resolution = 1.0;
  NetOptions net_opts;
  TrainOptions train_opts;
  DetectOptions detect_opts;
  synth::CorpusSpec corpus;

  auto* pre = app.add_subcommand("preprocess", "mirror left-wrist data and apply the smoothing/high-pass filters");
  pre->add_option("--in", in, "recording file")->required()->check(CLI::ExistingFile);
  pre->add_option("--out", out, "output recording file")->required();

  auto* tr = app.add_subcommand("train", "train the network on a manifest");
  tr->add_option("--manifest", manifest, "session manifest")->required()->check(CLI::ExistingFile);
  tr->add_option("--holdout", held_out, "subject to leave out");
  tr->add_option("--out", out, "weight file")->required();
  net_opts.add(tr);
  train_opts.add(tr);

  auto* db = app.add_subcommand("detect-bites", "detect bite moments in a recording");
  db->add_option("--weights", weights, "weight file")->required()->check(CLI::ExistingFile);
  db->add_option("--in", in, "recording file")->required()->check(CLI::ExistingFile);
  db->add_option("--out", out, "events file for detected bites")->required();
  db->add_option("--probabilities", probs_out, "also write the per-step probability series (CSV)");
  detect_opts.add_bite(db);

  auto* dm = app.add_subcommand("detect-meals", "localize meals from detected bites");
  dm->add_option("--bites", in, "events file with bite moments")->required()->check(CLI::ExistingFile);
  dm->add_option("--recording", recording, "recording the bites came from (sets duration and rate)")
      ->check(CLI::ExistingFile);
  dm->add_option("--duration", duration, "recording duration in seconds");
  dm->add_option("--fs", fs_hz, "recording sample rate");
  dm->add_option("--method", method, "edge (default) or dbscan")->check(CLI::IsMember({"edge", "dbscan"}));
  dm->add_option("--out", out, "events file for meals")->required();
  detect_opts.add_meal(dm);

  auto* eb = app.add_subcommand("evaluate-bites", "score detected bites against annotated intervals");
  eb->add_option("--detections", in, "events file with bite moments")->required()->check(CLI::ExistingFile);
  eb->add_option("--truth", truth, "events file with bite intervals")->required()->check(CLI::ExistingFile);

  auto* em = app.add_subcommand("evaluate-meals", "score estimated meals against annotated meals");
  em->add_option("--estimate", in, "events file with estimated meals")->required()->check(CLI::ExistingFile);
  em->add_option("--truth", truth, "events file with annotated meals")->required()->check(CLI::ExistingFile);
  em->add_option("--duration", duration, "recording duration in seconds")->required();
  em->add_option("--resolution", resolution, "timeline resolution in seconds");

  auto* sy = app.add_subcommand("synth", "generate a synthetic corpus with a manifest");
  sy->add_option("--out-dir", out, "output directory")->required();
  sy->add_option("--subjects", corpus.subjects, "number of subjects");
  sy->add_option("--meals-per-subject", corpus.meals_per_subject, "in-meal sessions per subject");
  sy->add_option("--meal-session", corpus.meal_session_s, "in-meal session length (s)");
  sy->add_option("--free-sessions", corpus.free_sessions, "free-living sessions");
  sy->add_option("--free-session", corpus.free_session_s, "free-living session length (s)");
  sy->add_option("--free-meals", corpus.free_meals, "meals per free-living session");
  sy->add_option("--free-meal", corpus.free_meal_s, "free-living meal length (s)");
  sy->add_option("--inter-bite", corpus.mean_inter_bite_s, "bite spacing (s)");
  sy->add_option("--distractors", corpus.distractors_per_hour, "non-eating gestures per hour");
  sy->add_option("--seed", corpus.seed, "rng seed");

  auto* lo = app.add_subcommand("loso", "leave-one-subject-out training and evaluation");
  lo->add_option("--manifest", manifest, "session manifest")->required()->check(CLI::ExistingFile);
  lo->add_option("--subjects", subjects, "folds to run (default: every subject)")->delimiter(',');
  lo->add_option("--resolution", resolution, "meal timeline resolution in seconds");
  net_opts.add(lo);
  train_opts.add(lo);
  detect_opts.add_bite(lo);
  detect_opts.add_meal(lo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  if (threads > 0) set_threads(threads);

  try {
    if (*pre) return run_preprocess(in, out);
    if (*tr) return run_train(manifest, held_out, out, net_opts, train_opts, as_json);
    if (*db) return run_detect_bites(weights, in, out, probs_out, detect_opts, as_json);
    if (*dm) return run_detect_meals(in, recording, duration, fs_hz, method, out, detect_opts, as_json);
    if (*eb) return run_evaluate_bites(in, truth, as_json);
    if (*em) return run_evaluate_meals(in, truth, duration, resolution, as_json);
    if (*sy) return run_synth(out, corpus);
    if (*lo) return run_loso(manifest, subjects, net_opts, train_opts, detect_opts, resolution, as_json);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
