#include "intake/meal_localize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "intake/error.hpp"
#include "intake/filters.hpp"
#include "intake/parallel.hpp"
#include "intake/peaks.hpp"

namespace intake {

namespace {

constexpr double kSlack = 1e-9;

std::size_t timeline_samples(double seconds, double fs_hz) {
  return static_cast<std::size_t>(std::llround(seconds * timeline_rate(fs_hz)));
}

std::vector<double> gaussian_for(const LocalizerConfig& cfg, double fs_hz) {
  return gaussian_taps(std::max<std::size_t>(1, timeline_samples(cfg.gauss_len_s, fs_hz)),
                       cfg.gauss_std_s * timeline_rate(fs_hz));
}

}  // namespace

void validate_intervals(std::span<const Interval> q) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i].start_s < q[i].end_s))
      throw Error(Errc::invalid_argument, "interval end must be after its start");
    if (i > 0 && q[i].start_s < q[i - 1].end_s)
      throw Error(Errc::overlapping_intervals, "intervals overlap or are unsorted");
  }
}

void LocalizerConfig::validate() const {
  if (!(gauss_len_s > 0.0 && gauss_std_s > 0.0 && lambda_s > 0.0 && merge_gap_s > 0.0 && min_duration_s > 0.0 &&
        edge_sidelobe_s > 0.0))
    throw Error(Errc::invalid_argument, "localizer parameters must be positive");
  if (!(gauss_std_s < gauss_len_s)) throw Error(Errc::invalid_argument, "gaussian std must be below its length");
}

std::vector<double> impulse_train(const BiteSet& bites, double duration_s, double fs_hz) {
  const auto n = static_cast<std::size_t>(std::floor(duration_s * timeline_rate(fs_hz) + kSlack));
  std::vector<double> s(n, 0.0);
  for (double b : bites.timestamps_s) {
    if (b < 0.0 || b > duration_s + kSlack)
      throw Error(Errc::invalid_argument, "bite at " + std::to_string(b) + " s lies outside the recording");
    auto idx = static_cast<std::size_t>(std::llround(b * fs_hz / 4.0));
    if (n == 0) continue;
    s[std::min(idx, n - 1)] = 1.0;
  }
  return s;
}

std::vector<double> smooth_close(std::span<const double> s, const LocalizerConfig& cfg, double fs_hz) {
  cfg.validate();
  const auto g = gaussian_for(cfg, fs_hz);
  const auto half = static_cast<std::ptrdiff_t>(g.size() / 2);

  std::vector<std::ptrdiff_t> nz;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (s[j] != 0.0) nz.push_back(static_cast<std::ptrdiff_t>(j));

  std::vector<double> out(s.size(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  const bool big = s.size() * std::min<std::size_t>(nz.size() + 1, g.size()) > kParallelGrain;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    // out[i] = sum_j s[j] * g[half + i - j] over |i - j| <= half
    auto it = std::lower_bound(nz.begin(), nz.end(), i - half);
    double acc = 0.0;
    for (; it != nz.end() && *it <= i + half; ++it) acc += s[static_cast<std::size_t>(*it)] * g[static_cast<std::size_t>(half + i - *it)];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

namespace serial {

std::vector<double> smooth_close(std::span<const double> s, const LocalizerConfig& cfg, double fs_hz) {
  cfg.validate();
  return intake::serial::convolve_same(s, gaussian_for(cfg, fs_hz));
}

}  // namespace serial

std::vector<long long> edge_kernel(std::size_t sidelobe) {
  std::vector<long long> h(2 * sidelobe + 1, 0);
  for (std::size_t k = 0; k < sidelobe; ++k) {
    h[k] = static_cast<long long>(k + 1);
    h[2 * sidelobe - k] = -static_cast<long long>(k + 1);
  }
  return h;
}

MealIntervalSet extract_edge_intervals(std::span<const double> smoothed, const LocalizerConfig& cfg, double fs_hz) {
  cfg.validate();
  const std::size_t k = std::max<std::size_t>(1, timeline_samples(cfg.edge_sidelobe_s, fs_hz));
  const auto h = edge_kernel(k);
  const std::size_t pad = k + 1;

  std::vector<long long> bin(smoothed.size() + 2 * pad, 0);
  for (std::size_t i = 0; i < smoothed.size(); ++i) bin[pad + i] = smoothed[i] >= cfg.lambda_s ? 1 : 0;

  // |d| = |bin * h|; the kernel's sign convention does not matter here.
  std::vector<long long> mag(bin.size(), 0);
  const auto len = static_cast<std::ptrdiff_t>(bin.size());
  for (std::ptrdiff_t n = 0; n < len; ++n) {
    long long acc = 0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const std::ptrdiff_t src = n + static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(j);
      if (src >= 0 && src < len) acc += h[j] * bin[static_cast<std::size_t>(src)];
    }
    mag[static_cast<std::size_t>(n)] = std::llabs(acc);
  }

  const auto edges = plateau_peaks<long long>(mag);
  if (edges.size() % 2 != 0) throw Error(Errc::unpaired_edge, "unpaired edge");

  const double rate = timeline_rate(fs_hz);
  auto to_seconds = [&](std::size_t padded) {
    // an edge plateau starts one sample before the first sample that differs
    const double idx = static_cast<double>(padded + 1) - static_cast<double>(pad);
    return std::clamp(idx, 0.0, static_cast<double>(smoothed.size())) / rate;
  };
  MealIntervalSet out;
  for (std::size_t e = 0; e < edges.size(); e += 2) {
    const double a = to_seconds(edges[e]);
    const double b = to_seconds(edges[e + 1]);
    if (b > a) out.push_back({a, b});
  }
  return out;
}

MealIntervalSet refine_intervals(MealIntervalSet q, const LocalizerConfig& cfg) {
  std::sort(q.begin(), q.end(), [](const Interval& a, const Interval& b) { return a.start_s < b.start_s; });
  MealIntervalSet merged;
  for (const auto& iv : q) {
    // sorted input: one sweep reaches the fixpoint
    if (!merged.empty() && iv.start_s - merged.back().end_s <= cfg.merge_gap_s + kSlack) {
      merged.back().end_s = std::max(merged.back().end_s, iv.end_s);
    } else {
      merged.push_back(iv);
    }
  }
  MealIntervalSet out;
  for (const auto& iv : merged)
    if (!(iv.duration() < cfg.min_duration_s - kSlack)) out.push_back(iv);
  return out;
}

MealIntervalSet localize_meals(const BiteSet& bites, double duration_s, double fs_hz, const LocalizerConfig& cfg) {
  const auto s = impulse_train(bites, duration_s, fs_hz);
  return refine_intervals(extract_edge_intervals(smooth_close(s, cfg, fs_hz), cfg, fs_hz), cfg);
}

MealIntervalSet dbscan_localize(const BiteSet& bites, double eps_s, std::size_t min_pts) {
  std::vector<double> t = bites.timestamps_s;
  std::sort(t.begin(), t.end());
  const std::size_t n = t.size();

  // neighbourhood of i is the index range [lo[i], hi[i])
  std::vector<std::size_t> lo(n), hi(n);
  for (std::size_t i = 0, a = 0, b = 0; i < n; ++i) {
    while (t[i] - t[a] > eps_s) ++a;
    if (b < i) b = i;
    while (b < n && t[b] - t[i] <= eps_s) ++b;
    lo[i] = a;
    hi[i] = b;
  }
  auto is_core = [&](std::size_t i) { return hi[i] - lo[i] >= min_pts; };

  constexpr long kUnassigned = -1;
  std::vector<long> cluster(n, kUnassigned);
  long next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster[i] != kUnassigned || !is_core(i)) continue;
    const long id = next_id++;
    std::vector<std::size_t> frontier{i};
    cluster[i] = id;
    while (!frontier.empty()) {
      const std::size_t p = frontier.back();
      frontier.pop_back();
      if (!is_core(p)) continue;
      for (std::size_t q = lo[p]; q < hi[p]; ++q) {
        if (cluster[q] != kUnassigned) continue;
        cluster[q] = id;
        frontier.push_back(q);
      }
    }
  }

  std::vector<Interval> spans(static_cast<std::size_t>(next_id), Interval{0.0, 0.0});
  std::vector<bool> seen(spans.size(), false);
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster[i] == kUnassigned) continue;
    auto& s = spans[static_cast<std::size_t>(cluster[i])];
    if (!seen[static_cast<std::size_t>(cluster[i])]) {
      s = {t[i], t[i]};
      seen[static_cast<std::size_t>(cluster[i])] = true;
    }
    s.start_s = std::min(s.start_s, t[i]);
    s.end_s = std::max(s.end_s, t[i]);
  }
  std::sort(spans.begin(), spans.end(), [](const Interval& a, const Interval& b) { return a.start_s < b.start_s; });
  return spans;
}

}  // namespace intake
