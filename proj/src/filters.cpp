#include "intake/filters.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "intake/error.hpp"
#include "intake/parallel.hpp"

namespace intake {

std::vector<double> moving_average_taps(std::size_t length, double tap) {
  if (length == 0) throw Error(Errc::invalid_argument, "moving average length must be positive");
  return std::vector<double>(length, tap);
}

std::vector<double> highpass_taps(std::size_t length, double cutoff_hz, double sample_rate_hz) {
  if (length < 2) throw Error(Errc::invalid_argument, "high-pass length must be at least 2");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0))
    throw Error(Errc::invalid_argument, "high-pass cutoff must lie in (0, fs/2)");

  const std::size_t taps = length % 2 == 0 ? length + 1 : length;
  const double fc = cutoff_hz / sample_rate_hz;
  const double centre = static_cast<double>(taps - 1) / 2.0;
  constexpr double pi = std::numbers::pi;

  std::vector<double> lp(taps);
  double sum = 0.0;
  for (std::size_t k = 0; k < taps; ++k) {
    const double m = static_cast<double>(k) - centre;
    const double sinc = m == 0.0 ? 2.0 * fc : std::sin(2.0 * pi * fc * m) / (pi * m);
    const double window = 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(k) / static_cast<double>(taps - 1));
    lp[k] = sinc * window;
    sum += lp[k];
  }
  std::vector<double> hp(taps);
  for (std::size_t k = 0; k < taps; ++k) hp[k] = -lp[k] / sum;
  hp[taps / 2] += 1.0;
  return hp;
}

std::vector<double> gaussian_taps(std::size_t length, double stddev) {
  if (length == 0 || !(stddev > 0.0))
    throw Error(Errc::invalid_argument, "gaussian kernel needs positive length and stddev");
  const std::size_t taps = length % 2 == 0 ? length + 1 : length;
  const double centre = static_cast<double>(taps / 2);
  std::vector<double> g(taps);
  double sum = 0.0;
  for (std::size_t k = 0; k < taps; ++k) {
    const double m = (static_cast<double>(k) - centre) / stddev;
    g[k] = std::exp(-0.5 * m * m);
    sum += g[k];
  }
  for (double& v : g) v /= sum;
  return g;
}

std::vector<double> convolve_same(std::span<const double> x, std::span<const double> taps) {
  const auto m = static_cast<std::ptrdiff_t>(x.size());
  const auto k_len = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t delay = (k_len - 1) / 2;
  std::vector<double> out(x.size(), 0.0);
  const double* xp = x.data();
  const double* tp = taps.data();
  double* op = out.data();

  const bool big = x.size() * taps.size() > kParallelGrain;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t n = 0; n < m; ++n) {
    // valid k: 0 <= n + delay - k < m
    const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, n + delay - (m - 1));
    const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(k_len - 1, n + delay);
    const double* xs = xp + n + delay;
    double acc = 0.0;
    for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) acc += tp[k] * xs[-k];
    op[n] = acc;
  }
  return out;
}

namespace serial {

std::vector<double> convolve_same(std::span<const double> x, std::span<const double> taps) {
  const std::size_t delay = (taps.size() - 1) / 2;
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const auto idx = static_cast<std::ptrdiff_t>(n + delay) - static_cast<std::ptrdiff_t>(k);
      if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(x.size())) acc += taps[k] * x[static_cast<std::size_t>(idx)];
    }
    out[n] = acc;
  }
  return out;
}

}  // namespace serial

double frequency_response(std::span<const double> taps, double freq_hz, double sample_rate_hz) {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < taps.size(); ++k)
    acc += taps[k] * std::polar(1.0, -w * static_cast<double>(k));
  return std::abs(acc);
}

}  // namespace intake
