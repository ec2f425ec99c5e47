#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "intake/bite_detect.hpp"
#include "intake/imu.hpp"
#include "intake/meal_localize.hpp"
#include "intake/windowing.hpp"

namespace intake {

struct BiteConfusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  BiteConfusion& operator+=(const BiteConfusion& o) {
    tp += o.tp, fp += o.fp, fn += o.fn;
    return *this;
  }
  friend bool operator==(const BiteConfusion&, const BiteConfusion&) = default;
};

struct MealConfusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  MealConfusion& operator+=(const MealConfusion& o) {
    tp += o.tp, fp += o.fp, fn += o.fn, tn += o.tn;
    return *this;
  }
  friend bool operator==(const MealConfusion&, const MealConfusion&) = default;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Each ground-truth interval can be claimed by at most one detection
/// (detections are visited in ascending time). Unclaimed intervals are
/// false negatives, every other detection a false positive.
BiteConfusion match_bites(const BiteSet& detections, std::span<const BiteAnnotation> truth);

// Ratios with a zero denominator are reported as 0.
PrecisionRecall precision_recall_f1(std::size_t tp, std::size_t fp, std::size_t fn);
inline PrecisionRecall precision_recall_f1(const BiteConfusion& c) { return precision_recall_f1(c.tp, c.fp, c.fn); }
inline PrecisionRecall precision_recall_f1(const MealConfusion& c) { return precision_recall_f1(c.tp, c.fp, c.fn); }

/// Sample-level confusion on a timeline of round(duration / resolution)
/// cells; a cell is inside a set when its midpoint is.
MealConfusion meal_confusion(std::span<const Interval> est, std::span<const Interval> truth, double duration_s,
                             double resolution_s = 1.0);

double specificity(const MealConfusion& c);
double accuracy(const MealConfusion& c);

/// Accuracy with true positives (and false negatives) weighted by `ratio`.
double weighted_accuracy(const MealConfusion& c, double ratio);

/// Total recording time over time spent eating.
double duration_ratio(double total_duration_s, double meal_duration_s);
double meal_weight_ratio(double total_duration_s, std::span<const Interval> truth);

/// Intersection and union length (seconds) of two interval sets.
struct Overlap {
  double intersection = 0.0;
  double union_ = 0.0;

  Overlap& operator+=(const Overlap& o) {
    intersection += o.intersection, union_ += o.union_;
    return *this;
  }
  /// 1 when both sets are empty.
  double jaccard() const noexcept { return union_ > 0.0 ? intersection / union_ : 1.0; }
};

Overlap interval_overlap(std::span<const Interval> a, std::span<const Interval> b);
double jaccard_index(std::span<const Interval> est, std::span<const Interval> truth);

struct MealReport {
  MealConfusion confusion;
  Overlap overlap;
  double precision = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  double weighted_accuracy = 0.0;
  double jaccard = 0.0;
};

MealReport make_meal_report(const MealConfusion& c, const Overlap& overlap, double ratio);

/// Centred moving sum of |ax| + |ay| + |az| over window_s * fs + 1 samples,
/// normalised by the number of samples actually inside the recording.
/// Callers pass smoothed accelerometer data.
std::vector<double> wrist_motion_energy(const ImuRecording& rec, double window_s);

namespace serial {
std::vector<double> wrist_motion_energy(const ImuRecording& rec, double window_s);
}  // namespace serial

}  // namespace intake
