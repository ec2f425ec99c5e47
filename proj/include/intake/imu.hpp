#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "intake/matrix.hpp"

namespace intake {

enum Channel : std::size_t { kAx = 0, kAy, kAz, kGx, kGy, kGz };
inline constexpr std::size_t kChannels = 6;

/// One IMU reading: acceleration (ax, ay, az) then angular velocity
/// (gx, gy, gz), indexed by Channel.
using ImuSample = std::array<double, kChannels>;

enum class Hand { Left, Right };

char hand_code(Hand h);
Hand parse_hand(char c);

/// Uniformly sampled 6-axis recording. Sample n is taken at n / fs seconds.
/// Immutable after construction.
class ImuRecording {
 public:
  ImuRecording(std::vector<ImuSample> samples, double sample_rate_hz, Hand hand,
               std::string units = {});

  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  Hand handedness() const noexcept { return hand_; }
  const std::string& units() const noexcept { return units_; }
  double duration_s() const noexcept { return static_cast<double>(size()) / sample_rate_hz_; }

  std::span<const ImuSample> samples() const noexcept { return samples_; }
  const ImuSample& operator[](std::size_t n) const noexcept { return samples_[n]; }

  std::vector<double> channel(std::size_t c) const;

  /// Rows [first, first + count) as a count x 6 matrix.
  Matrix<double> frame(std::size_t first, std::size_t count) const;
  Matrix<double> as_matrix() const { return frame(0, size()); }

  friend bool operator==(const ImuRecording&, const ImuRecording&) = default;

 private:
  std::vector<ImuSample> samples_;
  double sample_rate_hz_;
  Hand hand_;
  std::string units_;
};

ImuRecording with_channels(const ImuRecording& like, std::span<const std::vector<double>> channels);

struct PreprocessConfig {
  std::size_t ma_len = 25;
  double ma_tap = 1.0 / 25.0;
  double hp_cutoff_hz = 1.0;
  std::size_t hp_len = 512;

  /// Defaults are tuned for 100 Hz; this keeps the moving-average span
  /// (0.25 s) constant at other rates.
  static PreprocessConfig for_rate(double sample_rate_hz);
  void validate(double sample_rate_hz) const;
};

/// Negates ax, gy and gz of a left-wrist recording so it matches the
/// right-wrist frame. Right-wrist recordings are returned unchanged.
ImuRecording mirror_hand(const ImuRecording& rec);

/// Applies the mirroring sign pattern regardless of handedness and flips
/// the handedness tag. Involution.
ImuRecording apply_mirror_transform(const ImuRecording& rec);

/// Moving-average smoothing of all six streams, then gravity removal
/// (linear-phase high-pass) on the accelerometer streams. Output is
/// time-aligned with the input and has the same length.
ImuRecording preprocess(const ImuRecording& rec, const PreprocessConfig& cfg);

std::vector<double> accel_magnitude(const ImuRecording& rec);

/// Linear interpolation onto a target_hz grid covering the same duration
/// (round(M * target / fs) samples). Grid points past the last input
/// sample hold its value.
ImuRecording resample(const ImuRecording& rec, double target_hz);

}  // namespace intake
