#include "intake/bite_detect.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>

#include "intake/error.hpp"
#include "intake/peaks.hpp"

namespace intake {

void BiteDetectConfig::validate() const {
  if (!(lambda_p > 0.0 && lambda_p < 1.0)) throw Error(Errc::invalid_argument, "lambda_p must lie in (0, 1)");
  if (!(min_gap_s > 0.0)) throw Error(Errc::invalid_argument, "min_gap_s must be positive");
}

std::vector<std::size_t> select_peaks(std::span<const double> p, double lambda_p, double min_gap_samples) {
  std::vector<double> thresholded(p.begin(), p.end());
  for (double& v : thresholded)
    if (v < lambda_p) v = 0.0;

  std::vector<std::size_t> candidates = plateau_peaks<double>(thresholded);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return thresholded[a] > thresholded[b]; });

  std::set<std::size_t> kept;
  for (std::size_t c : candidates) {
    auto right = kept.lower_bound(c);
    if (right != kept.end() && static_cast<double>(*right - c) < min_gap_samples) continue;
    if (right != kept.begin() && static_cast<double>(c - *std::prev(right)) < min_gap_samples) continue;
    kept.insert(c);
  }
  return {kept.begin(), kept.end()};
}

BiteSet detect_bites(std::span<const double> p, double fs_hz, const BiteDetectConfig& cfg) {
  cfg.validate();
  if (!(fs_hz > 0.0)) throw Error(Errc::invalid_argument, "sample rate must be positive");
  const double rate = fs_hz / 4.0;
  BiteSet out;
  for (std::size_t n : select_peaks(p, cfg.lambda_p, cfg.min_gap_s * rate))
    out.timestamps_s.push_back(static_cast<double>(n) * 4.0 / fs_hz);
  return out;
}

BiteSet union_bites(const BiteSet& a, const BiteSet& b) {
  BiteSet out;
  std::set_union(a.timestamps_s.begin(), a.timestamps_s.end(), b.timestamps_s.begin(), b.timestamps_s.end(),
                 std::back_inserter(out.timestamps_s));
  out.timestamps_s.erase(std::unique(out.timestamps_s.begin(), out.timestamps_s.end()), out.timestamps_s.end());
  return out;
}

}  // namespace intake
