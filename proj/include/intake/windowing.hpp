#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "intake/imu.hpp"
#include "intake/matrix.hpp"

namespace intake {

enum class Label { Positive, Negative, NotApplicable };

struct BiteAnnotation {
  double start_s;
  double end_s;
  friend bool operator==(const BiteAnnotation&, const BiteAnnotation&) = default;
};

struct MealAnnotation {
  double start_s;
  double end_s;
  friend bool operator==(const MealAnnotation&, const MealAnnotation&) = default;
};

struct LabeledWindow {
  Matrix<double> frame;  // w_l x 6
  double end_time_s;
  Label label;
};

struct WindowConfig {
  double w_l_s = 5.0;
  double w_s_s = 0.05;
  double epsilon_s = 0.1;

  static WindowConfig in_meal() { return {}; }
  static WindowConfig free_living() { return {5.0, 1.0, 0.1}; }

  void validate() const;
  std::size_t length_samples(double fs) const;
  std::size_t step_samples(double fs) const;
};

struct WindowPos {
  std::size_t first;  // first sample index
  double end_time_s;  // (first + w_l) / fs
};

/// Window placements for a recording of `num_samples`; empty when the
/// recording is shorter than one window.
std::vector<WindowPos> window_positions(std::size_t num_samples, double fs, const WindowConfig& cfg);

std::vector<std::pair<Matrix<double>, double>> slide_windows(const ImuRecording& rec, const WindowConfig& cfg);

// Label of the window whose right edge is at end_time_s. Annotations must be
// sorted by time.
Label assign_label(double end_time_s, std::span<const BiteAnnotation> bites, const WindowConfig& cfg);
Label assign_label(double end_time_s, std::span<const MealAnnotation> meals);

// ---------------------------------------------------------------------------
// Orientation augmentation

enum class RotationOrder { X, Z, XZ, ZX };

struct Rotation {
  double theta_x_deg = 0.0;
  double theta_z_deg = 0.0;
  RotationOrder order = RotationOrder::X;
};

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 rotation_x(double theta_deg);
Mat3 rotation_z(double theta_deg);
Mat3 rotation_matrix(const Rotation& r);

/// Applies Q to the accelerometer triple and to the gyroscope triple of
/// every row (right-handed axes, counter-clockwise positive angles).
Matrix<double> apply_rotation(const Matrix<double>& frame, const Mat3& q);

struct AugmentConfig {
  double probability = 0.5;
  double theta_std_deg = 10.0;
};

/// With probability cfg.probability rotates the frame by a random
/// x/z rotation; otherwise returns it unchanged. Never rotates about y.
Matrix<double> rotation_augment(const Matrix<double>& frame, std::mt19937_64& rng,
                                const AugmentConfig& cfg = {});

// ---------------------------------------------------------------------------
// Balanced batching

using Batch = std::vector<std::size_t>;

/// One epoch of batches, each holding batch_size / 2 positive and
/// batch_size / 2 negative pool indices. The larger class is walked once
/// without replacement; the smaller one is drawn without replacement until
/// exhausted and with replacement after that.
std::vector<Batch> make_balanced_batches(std::span<const Label> labels, std::size_t batch_size,
                                         std::mt19937_64& rng);
std::vector<Batch> make_balanced_batches(std::span<const LabeledWindow> pool, std::size_t batch_size,
                                         std::mt19937_64& rng);

/// Training windows that reference shared recordings instead of owning
/// w_l x 6 copies.
class WindowPool {
 public:
  /// Windows of an in-meal recording labelled from bite annotations.
  void add_in_meal(std::shared_ptr<const ImuRecording> rec, std::span<const BiteAnnotation> bites,
                   const WindowConfig& cfg);
  /// Windows of a free-living recording; windows ending inside a meal are
  /// not applicable and are dropped.
  void add_free_living(std::shared_ptr<const ImuRecording> rec, std::span<const MealAnnotation> meals,
                       const WindowConfig& cfg);
  void add(LabeledWindow w);

  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const Label> labels() const noexcept { return labels_; }
  Label label(std::size_t i) const { return labels_[i]; }
  double end_time_s(std::size_t i) const { return entries_[i].end_time_s; }
  Matrix<double> frame(std::size_t i) const;
  std::size_t count(Label l) const;

  /// Keeps every positive and a random subset of at most `max_negatives`
  /// negatives.
  WindowPool subsample_negatives(std::size_t max_negatives, std::mt19937_64& rng) const;

 private:
  struct Entry {
    std::size_t source;  // index into recordings_, or owned_ when owned is set
    std::size_t first;
    std::size_t length;
    double end_time_s;
    bool owned;
  };
  std::vector<std::shared_ptr<const ImuRecording>> recordings_;
  std::vector<Matrix<double>> owned_;
  std::vector<Entry> entries_;
  std::vector<Label> labels_;
};

}  // namespace intake
