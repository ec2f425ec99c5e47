#include "intake/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "intake/error.hpp"
#include "intake/parallel.hpp"

namespace intake {

BiteConfusion match_bites(const BiteSet& detections, std::span<const BiteAnnotation> truth) {
  for (std::size_t j = 1; j < truth.size(); ++j)
    if (truth[j].start_s < truth[j - 1].end_s)
      throw Error(Errc::overlapping_intervals, "ground-truth bite intervals overlap or are unsorted");

  std::vector<double> det = detections.timestamps_s;
  std::sort(det.begin(), det.end());
  std::vector<bool> claimed(truth.size(), false);
  BiteConfusion c;
  for (double b : det) {
    // last interval starting at or before b
    auto it = std::upper_bound(truth.begin(), truth.end(), b,
                               [](double t, const BiteAnnotation& g) { return t < g.start_s; });
    if (it == truth.begin()) {
      ++c.fp;
      continue;
    }
    const auto j = static_cast<std::size_t>(std::distance(truth.begin(), it) - 1);
    if (b <= truth[j].end_s && !claimed[j]) {
      claimed[j] = true;
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = static_cast<std::size_t>(std::count(claimed.begin(), claimed.end(), false));
  return c;
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

PrecisionRecall precision_recall_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  PrecisionRecall r;
  r.precision = ratio_or_zero(static_cast<double>(tp), static_cast<double>(tp + fp));
  r.recall = ratio_or_zero(static_cast<double>(tp), static_cast<double>(tp + fn));
  r.f1 = ratio_or_zero(2.0 * r.precision * r.recall, r.precision + r.recall);
  return r;
}

MealConfusion meal_confusion(std::span<const Interval> est, std::span<const Interval> truth, double duration_s,
                             double resolution_s) {
  if (!(resolution_s > 0.0)) throw Error(Errc::invalid_argument, "resolution must be positive");
  const auto cells = static_cast<std::size_t>(std::llround(duration_s / resolution_s));
  auto mark = [&](std::span<const Interval> set) {
    std::vector<char> in(cells, 0);
    for (const auto& iv : set) {
      // cells k with iv.start <= (k + 0.5) * res <= iv.end
      const double lo = std::ceil(iv.start_s / resolution_s - 0.5);
      const double hi = std::floor(iv.end_s / resolution_s - 0.5);
      for (double k = std::max(lo, 0.0); k <= hi && k < static_cast<double>(cells); k += 1.0)
        in[static_cast<std::size_t>(k)] = 1;
    }
    return in;
  };
  const auto e = mark(est);
  const auto t = mark(truth);
  MealConfusion c;
  for (std::size_t k = 0; k < cells; ++k) {
    if (e[k] && t[k]) ++c.tp;
    else if (e[k]) ++c.fp;
    else if (t[k]) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double specificity(const MealConfusion& c) {
  return ratio_or_zero(static_cast<double>(c.tn), static_cast<double>(c.tn + c.fp));
}

double accuracy(const MealConfusion& c) {
  return ratio_or_zero(static_cast<double>(c.tp + c.tn), static_cast<double>(c.total()));
}

double weighted_accuracy(const MealConfusion& c, double ratio) {
  if (!(ratio > 0.0)) throw Error(Errc::invalid_argument, "weighting ratio must be positive");
  const double num = static_cast<double>(c.tp) * ratio + static_cast<double>(c.tn);
  const double den = static_cast<double>(c.tp + c.fn) * ratio + static_cast<double>(c.fp + c.tn);
  return ratio_or_zero(num, den);
}

double duration_ratio(double total_duration_s, double meal_duration_s) {
  if (!(meal_duration_s > 0.0)) throw Error(Errc::invalid_argument, "meal duration must be positive");
  return total_duration_s / meal_duration_s;
}

double meal_weight_ratio(double total_duration_s, std::span<const Interval> truth) {
  double meal = 0.0;
  for (const auto& iv : truth) meal += iv.duration();
  return duration_ratio(total_duration_s, meal);
}

namespace {

double total_length(std::span<const Interval> s) {
  // union length, tolerating overlap
  std::vector<Interval> v(s.begin(), s.end());
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.start_s < b.start_s; });
  double len = 0.0, cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (const auto& iv : v) {
    if (!open || iv.start_s > cur_hi) {
      if (open) len += cur_hi - cur_lo;
      cur_lo = iv.start_s;
      cur_hi = iv.end_s;
      open = true;
    } else {
      cur_hi = std::max(cur_hi, iv.end_s);
    }
  }
  if (open) len += cur_hi - cur_lo;
  return len;
}

}  // namespace

Overlap interval_overlap(std::span<const Interval> a, std::span<const Interval> b) {
  double inter = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].start_s, b[j].start_s);
    const double hi = std::min(a[i].end_s, b[j].end_s);
    if (hi > lo) inter += hi - lo;
    if (a[i].end_s < b[j].end_s) ++i;
    else ++j;
  }
  Overlap o;
  o.intersection = inter;
  o.union_ = total_length(a) + total_length(b) - inter;
  return o;
}

double jaccard_index(std::span<const Interval> est, std::span<const Interval> truth) {
  return interval_overlap(est, truth).jaccard();
}

MealReport make_meal_report(const MealConfusion& c, const Overlap& overlap, double ratio) {
  MealReport r;
  r.confusion = c;
  r.overlap = overlap;
  const auto prf = precision_recall_f1(c);
  r.precision = prf.precision;
  r.recall = prf.recall;
  r.f1 = prf.f1;
  r.specificity = specificity(c);
  r.accuracy = accuracy(c);
  r.weighted_accuracy = weighted_accuracy(c, ratio);
  r.jaccard = overlap.jaccard();
  return r;
}

namespace {

std::size_t energy_window(const ImuRecording& rec, double window_s) {
  const auto w = static_cast<long long>(std::llround(window_s * rec.sample_rate_hz()));
  if (w < 0 || w % 2 != 0)
    throw Error(Errc::invalid_argument, "energy window must span an even number of samples");
  return static_cast<std::size_t>(w);
}

}  // namespace

std::vector<double> wrist_motion_energy(const ImuRecording& rec, double window_s) {
  const std::size_t half = energy_window(rec, window_s) / 2;
  const std::size_t m = rec.size();
  std::vector<double> act(m);
  for (std::size_t n = 0; n < m; ++n)
    act[n] = std::abs(rec[n][kAx]) + std::abs(rec[n][kAy]) + std::abs(rec[n][kAz]);

  std::vector<double> out(m);
  const auto len = static_cast<std::ptrdiff_t>(m);
  const bool big = m * (2 * half + 1) > kParallelGrain;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t t = 0; t < len; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) >= half ? static_cast<std::size_t>(t) - half : 0;
    const std::size_t hi = std::min(m - 1, static_cast<std::size_t>(t) + half);
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += act[i];
    out[static_cast<std::size_t>(t)] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

namespace serial {

std::vector<double> wrist_motion_energy(const ImuRecording& rec, double window_s) {
  const auto half = static_cast<std::ptrdiff_t>(energy_window(rec, window_s) / 2);
  const auto m = static_cast<std::ptrdiff_t>(rec.size());
  std::vector<double> out(rec.size());
  for (std::ptrdiff_t t = 0; t < m; ++t) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::ptrdiff_t i = t - half; i <= t + half; ++i) {
      if (i < 0 || i >= m) continue;
      const auto& s = rec[static_cast<std::size_t>(i)];
      acc += std::abs(s[kAx]) + std::abs(s[kAy]) + std::abs(s[kAz]);
      ++count;
    }
    out[static_cast<std::size_t>(t)] = acc / static_cast<double>(count);
  }
  return out;
}

}  // namespace serial

}  // namespace intake
