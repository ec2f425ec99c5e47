#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace intake {

/// Indices of local maxima of `x`. A run of equal values is a peak when it
/// is strictly above both neighbouring values (samples outside the series
/// count as zero) and above zero; the first index of the run is reported.
template <typename T>
std::vector<std::size_t> plateau_peaks(std::span<const T> x) {
  std::vector<std::size_t> peaks;
  const std::size_t n = x.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    const T left = i == 0 ? T{} : x[i - 1];
    const T right = j + 1 == n ? T{} : x[j + 1];
    if (x[i] > T{} && x[i] > left && x[i] > right) peaks.push_back(i);
    i = j + 1;
  }
  return peaks;
}

}  // namespace intake
