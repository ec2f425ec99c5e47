#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. They are written independently of the library code paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "intake/bite_detect.hpp"
#include "intake/imu.hpp"
#include "intake/meal_localize.hpp"

namespace oracle {

// out[n] = sum_k taps[k] * x[n + (K - 1) / 2 - k], zero outside x.
inline std::vector<double> convolve_same(const std::vector<double>& x, const std::vector<double>& taps) {
  const long n = static_cast<long>(x.size());
  const long k = static_cast<long>(taps.size());
  const long delay = (k - 1) / 2;
  std::vector<double> out(x.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long j = 0; j < k; ++j) {
      const long src = i + delay - j;
      if (src >= 0 && src < n) acc += taps[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(src)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

// Windowed-sinc Hamming high-pass with `taps` (odd) coefficients.
inline std::vector<double> highpass(std::size_t taps, double cutoff_hz, double fs) {
  const double fc = cutoff_hz / fs;
  const double m = static_cast<double>(taps - 1);
  const double pi = std::acos(-1.0);
  std::vector<double> h(taps);
  double sum = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    const double x = static_cast<double>(i) - m / 2.0;
    const double sinc = x == 0.0 ? 2.0 * fc : std::sin(2.0 * pi * fc * x) / (pi * x);
    h[i] = sinc * (0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(i) / m));
    sum += h[i];
  }
  for (auto& v : h) v = -v / sum;
  h[taps / 2] += 1.0;
  return h;
}

inline intake::ImuRecording preprocess(const intake::ImuRecording& rec, std::size_t ma_len, double hp_cutoff,
                                       std::size_t hp_taps) {
  const std::vector<double> ma(ma_len, 1.0 / static_cast<double>(ma_len));
  const auto hp = highpass(hp_taps, hp_cutoff, rec.sample_rate_hz());
  std::vector<std::vector<double>> ch(intake::kChannels);
  for (std::size_t c = 0; c < intake::kChannels; ++c) {
    ch[c] = convolve_same(rec.channel(c), ma);
    if (c < 3) ch[c] = convolve_same(ch[c], hp);
  }
  return intake::with_channels(rec, ch);
}

// Threshold, enumerate plateau maxima, then repeatedly keep the highest
// remaining candidate (earliest on ties) and discard everything closer
// than min_gap.
inline std::vector<std::size_t> select_peaks(const std::vector<double>& p, double lambda, double min_gap) {
  const std::size_t n = p.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = p[i] >= lambda ? p[i] : 0.0;
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= 0.0) continue;
    if (i > 0 && x[i - 1] == x[i]) continue;  // not the first of a run
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    const double left = i == 0 ? 0.0 : x[i - 1];
    const double right = j + 1 >= n ? 0.0 : x[j + 1];
    if (x[i] > left && x[i] > right) cand.push_back(i);
  }
  std::vector<bool> alive(cand.size(), true);
  std::vector<std::size_t> kept;
  while (true) {
    long best = -1;
    for (std::size_t c = 0; c < cand.size(); ++c) {
      if (!alive[c]) continue;
      if (best < 0 || x[cand[c]] > x[cand[static_cast<std::size_t>(best)]]) best = static_cast<long>(c);
    }
    if (best < 0) break;
    const std::size_t b = cand[static_cast<std::size_t>(best)];
    kept.push_back(b);
    for (std::size_t c = 0; c < cand.size(); ++c) {
      const double d = std::abs(static_cast<double>(cand[c]) - static_cast<double>(b));
      if (d < min_gap) alive[c] = false;
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// Gaussian smoothing of an impulse train by direct summation.
inline std::vector<double> smooth(const std::vector<double>& s, std::size_t len, double stddev) {
  if (len % 2 == 0) ++len;
  const double c = static_cast<double>(len - 1) / 2.0;
  std::vector<double> g(len);
  double sum = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double z = (static_cast<double>(k) - c) / stddev;
    g[k] = std::exp(-0.5 * z * z);
    sum += g[k];
  }
  for (auto& v : g) v /= sum;
  return convolve_same(s, g);
}

// Runs of samples >= lambda as [first, one-past-last) index pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> runs_above(const std::vector<double>& s, double lambda) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] < lambda) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] >= lambda) ++j;
    out.emplace_back(i, j);
    i = j;
  }
  return out;
}

// Textbook DBSCAN on 1-D points with O(n^2) region queries. Each cluster
// is reported as [min, max] of its members.
inline std::vector<intake::Interval> dbscan(std::vector<double> pts, double eps, std::size_t min_pts) {
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  auto region = [&](std::size_t i) {
    std::vector<std::size_t> r;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) <= eps) r.push_back(j);
    return r;
  };
  constexpr int kNone = -2, kNoise = -1;
  std::vector<int> label(n, kNone);
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kNone) continue;
    auto nb = region(i);
    if (nb.size() < min_pts) {
      label[i] = kNoise;
      continue;
    }
    label[i] = cluster;
    std::vector<std::size_t> seeds = nb;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const std::size_t q = seeds[s];
      if (label[q] == kNoise) label[q] = cluster;
      if (label[q] != kNone) continue;
      label[q] = cluster;
      auto nq = region(q);
      if (nq.size() >= min_pts) seeds.insert(seeds.end(), nq.begin(), nq.end());
    }
    ++cluster;
  }
  std::vector<intake::Interval> out;
  for (int c = 0; c < cluster; ++c) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i)
      if (label[i] == c) lo = std::min(lo, pts[i]), hi = std::max(hi, pts[i]);
    out.push_back({lo, hi});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.start_s < b.start_s; });
  return out;
}

inline std::vector<double> motion_energy(const intake::ImuRecording& rec, std::size_t w) {
  const long n = static_cast<long>(rec.size());
  const long half = static_cast<long>(w / 2);
  std::vector<double> out(rec.size());
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    long count = 0;
    for (long j = i - half; j <= i + half; ++j) {
      if (j < 0 || j >= n) continue;
      const auto& s = rec[static_cast<std::size_t>(j)];
      acc += std::abs(s[0]) + std::abs(s[1]) + std::abs(s[2]);
      ++count;
    }
    out[static_cast<std::size_t>(i)] = acc / static_cast<double>(count);
  }
  return out;
}

inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return scale > 0.0 ? worst / scale : worst;
}

inline intake::ImuRecording random_recording(std::mt19937_64& rng, std::size_t m, double fs = 100.0,
                                             intake::Hand hand = intake::Hand::Right) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<intake::ImuSample> s(m);
  for (auto& row : s)
    for (auto& v : row) v = g(rng);
  return intake::ImuRecording(std::move(s), fs, hand, "g;rad/s");
}

}  // namespace oracle
