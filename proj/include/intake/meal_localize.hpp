#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "intake/bite_detect.hpp"

namespace intake {

struct Interval {
  double start_s;
  double end_s;

  double duration() const noexcept { return end_s - start_s; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorted, pairwise-disjoint intervals.
using MealIntervalSet = std::vector<Interval>;

/// Throws unless every interval has start < end and the set is sorted and
/// non-overlapping.
void validate_intervals(std::span<const Interval> q);

struct LocalizerConfig {
  double gauss_len_s = 240.0;
  double gauss_std_s = 45.0;
  double lambda_s = 5e-4;
  double merge_gap_s = 180.0;
  double min_duration_s = 180.0;
  double edge_sidelobe_s = 1.0;

  void validate() const;
};

/// Rate of the prediction timeline (two x2 poolings).
inline double timeline_rate(double fs_hz) { return fs_hz / 4.0; }

/// Unit impulses at round(b * fs / 4) on a series of floor(duration * fs / 4)
/// samples.
std::vector<double> impulse_train(const BiteSet& bites, double duration_s, double fs_hz);

/// Same-length convolution with a unit-sum Gaussian of gauss_len_s and
/// gauss_std_s (in timeline samples). Only non-zero inputs are visited, so
/// sparse impulse trains are cheap.
std::vector<double> smooth_close(std::span<const double> s, const LocalizerConfig& cfg, double fs_hz);

namespace serial {
std::vector<double> smooth_close(std::span<const double> s, const LocalizerConfig& cfg, double fs_hz);
}  // namespace serial

/// Derivative kernel [1, 2, ..., K, 0, -K, ..., -2, -1].
std::vector<long long> edge_kernel(std::size_t sidelobe);

/// Binarises at lambda_s, finds region edges as local maxima of the
/// edge-filter response and pairs them into [start, end] intervals.
MealIntervalSet extract_edge_intervals(std::span<const double> smoothed, const LocalizerConfig& cfg, double fs_hz);

/// Merges neighbours closer than merge_gap_s (until nothing changes), then
/// drops intervals shorter than min_duration_s.
MealIntervalSet refine_intervals(MealIntervalSet q, const LocalizerConfig& cfg);

MealIntervalSet localize_meals(const BiteSet& bites, double duration_s, double fs_hz,
                               const LocalizerConfig& cfg = {});

/// Density-clustering baseline: each cluster of bite timestamps becomes
/// [first, last]; noise points are ignored.
MealIntervalSet dbscan_localize(const BiteSet& bites, double eps_s = 180.0, std::size_t min_pts = 2);

}  // namespace intake
