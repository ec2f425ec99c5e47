#include "intake/imu.hpp"

#include <algorithm>
#include <cmath>

#include "intake/error.hpp"
#include "intake/filters.hpp"

namespace intake {

char hand_code(Hand h) { return h == Hand::Left ? 'L' : 'R'; }

Hand parse_hand(char c) {
  switch (c) {
    case 'L': case 'l': return Hand::Left;
    case 'R': case 'r': return Hand::Right;
    default: throw Error(Errc::invalid_argument, std::string("unknown hand '") + c + "'");
  }
}

ImuRecording::ImuRecording(std::vector<ImuSample> samples, double sample_rate_hz, Hand hand,
                           std::string units)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz), hand_(hand), units_(std::move(units)) {
  if (samples_.empty()) throw Error(Errc::invalid_argument, "recording needs at least one sample");
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
    throw Error(Errc::invalid_argument, "sample rate must be positive");
  for (const auto& s : samples_)
    for (double v : s)
      if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "recording contains non-finite values");
}

std::vector<double> ImuRecording::channel(std::size_t c) const {
  std::vector<double> out(size());
  for (std::size_t n = 0; n < size(); ++n) out[n] = samples_[n][c];
  return out;
}

Matrix<double> ImuRecording::frame(std::size_t first, std::size_t count) const {
  Matrix<double> m(count, kChannels);
  for (std::size_t r = 0; r < count; ++r)
    std::copy(samples_[first + r].begin(), samples_[first + r].end(), m.row(r).begin());
  return m;
}

ImuRecording with_channels(const ImuRecording& like, std::span<const std::vector<double>> channels) {
  std::vector<ImuSample> samples(channels.front().size());
  for (std::size_t c = 0; c < kChannels; ++c)
    for (std::size_t n = 0; n < samples.size(); ++n) samples[n][c] = channels[c][n];
  return ImuRecording(std::move(samples), like.sample_rate_hz(), like.handedness(), like.units());
}

PreprocessConfig PreprocessConfig::for_rate(double sample_rate_hz) {
  PreprocessConfig cfg;
  cfg.ma_len = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.25 * sample_rate_hz)));
  cfg.ma_tap = 1.0 / static_cast<double>(cfg.ma_len);
  return cfg;
}

void PreprocessConfig::validate(double sample_rate_hz) const {
  if (ma_len < 1) throw Error(Errc::invalid_argument, "ma_len must be >= 1");
  if (hp_len < 2) throw Error(Errc::invalid_argument, "hp_len must be >= 2");
  if (!(hp_cutoff_hz > 0.0) || !(hp_cutoff_hz < sample_rate_hz / 2.0))
    throw Error(Errc::invalid_argument, "hp_cutoff_hz must lie in (0, fs/2)");
}

namespace {

constexpr std::array<double, kChannels> kMirrorSigns{-1.0, 1.0, 1.0, 1.0, -1.0, -1.0};

}  // namespace

ImuRecording apply_mirror_transform(const ImuRecording& rec) {
  std::vector<ImuSample> out(rec.samples().begin(), rec.samples().end());
  for (auto& s : out)
    for (std::size_t c = 0; c < kChannels; ++c) s[c] *= kMirrorSigns[c];
  const Hand flipped = rec.handedness() == Hand::Left ? Hand::Right : Hand::Left;
  return ImuRecording(std::move(out), rec.sample_rate_hz(), flipped, rec.units());
}

ImuRecording mirror_hand(const ImuRecording& rec) {
  if (rec.handedness() == Hand::Right) return rec;
  return apply_mirror_transform(rec);
}

ImuRecording preprocess(const ImuRecording& rec, const PreprocessConfig& cfg) {
  cfg.validate(rec.sample_rate_hz());
  if (rec.size() < cfg.hp_len) throw Error(Errc::too_short, "recording too short to filter");

  const auto ma = moving_average_taps(cfg.ma_len, cfg.ma_tap);
  const auto hp = highpass_taps(cfg.hp_len, cfg.hp_cutoff_hz, rec.sample_rate_hz());

  std::vector<std::vector<double>> streams(kChannels);
  for (std::size_t c = 0; c < kChannels; ++c) {
    streams[c] = convolve_same(rec.channel(c), ma);
    if (c <= kAz) streams[c] = convolve_same(streams[c], hp);
  }
  return with_channels(rec, streams);
}

std::vector<double> accel_magnitude(const ImuRecording& rec) {
  std::vector<double> out(rec.size());
  for (std::size_t n = 0; n < rec.size(); ++n) {
    const auto& s = rec[n];
    out[n] = std::sqrt(s[kAx] * s[kAx] + s[kAy] * s[kAy] + s[kAz] * s[kAz]);
  }
  return out;
}

ImuRecording resample(const ImuRecording& rec, double target_hz) {
  if (!(target_hz > 0.0) || !std::isfinite(target_hz))
    throw Error(Errc::invalid_argument, "target rate must be positive");
  const double fs = rec.sample_rate_hz();
  const auto out_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(rec.size()) * target_hz / fs)));
  const std::size_t last = rec.size() - 1;

  std::vector<ImuSample> out(out_len);
  for (std::size_t k = 0; k < out_len; ++k) {
    const double pos = static_cast<double>(k) * fs / target_hz;  // fractional input index
    const auto i0 = static_cast<std::size_t>(std::floor(pos));
    if (i0 >= last) {
      out[k] = rec[last];
      continue;
    }
    const double frac = pos - static_cast<double>(i0);
    for (std::size_t c = 0; c < kChannels; ++c)
      out[k][c] = rec[i0][c] + frac * (rec[i0 + 1][c] - rec[i0][c]);
  }
  return ImuRecording(std::move(out), target_hz, rec.handedness(), rec.units());
}

}  // namespace intake
