#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace intake {

/// Detected bite moments in seconds, strictly increasing.
struct BiteSet {
  std::vector<double> timestamps_s;

  std::size_t size() const noexcept { return timestamps_s.size(); }
  bool empty() const noexcept { return timestamps_s.empty(); }
  friend bool operator==(const BiteSet&, const BiteSet&) = default;
};

struct BiteDetectConfig {
  double lambda_p = 0.89;
  double min_gap_s = 2.0;

  void validate() const;
};

/// Peak indices of the thresholded prediction series: values below
/// lambda_p are zeroed, local maxima are kept greedily by height (earlier
/// index wins ties) while every kept pair is at least min_gap_samples apart.
/// Returned in ascending order.
std::vector<std::size_t> select_peaks(std::span<const double> p, double lambda_p, double min_gap_samples);

/// Bite timestamps from a prediction series running at fs_hz / 4.
BiteSet detect_bites(std::span<const double> p, double fs_hz, const BiteDetectConfig& cfg = {});

/// Sorted union with duplicate timestamps collapsed.
BiteSet union_bites(const BiteSet& a, const BiteSet& b);

}  // namespace intake
