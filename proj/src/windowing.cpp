#include "intake/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "intake/error.hpp"

namespace intake {

namespace {

// Window end times are ratios of integers; keep the inclusive bounds
// inclusive despite rounding.
constexpr double kTimeSlack = 1e-9;

}  // namespace

void WindowConfig::validate() const {
  if (!(w_l_s > 0.0) || !(w_s_s > 0.0) || !(epsilon_s > 0.0))
    throw Error(Errc::invalid_argument, "window parameters must be positive");
  if (w_s_s > w_l_s) throw Error(Errc::invalid_argument, "window step must not exceed window length");
}

std::size_t WindowConfig::length_samples(double fs) const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w_l_s * fs)));
}

std::size_t WindowConfig::step_samples(double fs) const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w_s_s * fs)));
}

std::vector<WindowPos> window_positions(std::size_t num_samples, double fs, const WindowConfig& cfg) {
  cfg.validate();
  const std::size_t len = cfg.length_samples(fs);
  const std::size_t step = cfg.step_samples(fs);
  std::vector<WindowPos> out;
  if (num_samples < len) return out;
  out.reserve((num_samples - len) / step + 1);
  for (std::size_t first = 0; first + len <= num_samples; first += step)
    out.push_back({first, static_cast<double>(first + len) / fs});
  return out;
}

std::vector<std::pair<Matrix<double>, double>> slide_windows(const ImuRecording& rec, const WindowConfig& cfg) {
  const std::size_t len = cfg.length_samples(rec.sample_rate_hz());
  std::vector<std::pair<Matrix<double>, double>> out;
  for (const auto& pos : window_positions(rec.size(), rec.sample_rate_hz(), cfg))
    out.emplace_back(rec.frame(pos.first, len), pos.end_time_s);
  return out;
}

Label assign_label(double end_time_s, std::span<const BiteAnnotation> bites, const WindowConfig& cfg) {
  // first bite whose end is not before end_time - eps
  const double lo = end_time_s - cfg.epsilon_s - kTimeSlack;
  auto it = std::lower_bound(bites.begin(), bites.end(), lo,
                             [](const BiteAnnotation& b, double t) { return b.end_s < t; });
  if (it != bites.end() && it->end_s <= end_time_s + cfg.epsilon_s + kTimeSlack) return Label::Positive;
  return Label::Negative;
}

Label assign_label(double end_time_s, std::span<const MealAnnotation> meals) {
  auto it = std::lower_bound(meals.begin(), meals.end(), end_time_s - kTimeSlack,
                             [](const MealAnnotation& m, double t) { return m.end_s < t; });
  if (it != meals.end() && it->start_s <= end_time_s + kTimeSlack) return Label::NotApplicable;
  return Label::Negative;
}

// ---------------------------------------------------------------------------

Mat3 rotation_x(double theta_deg) {
  const double t = theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  return {{{1.0, 0.0, 0.0}, {0.0, c, -s}, {0.0, s, c}}};
}

Mat3 rotation_z(double theta_deg) {
  const double t = theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

namespace {

Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

}  // namespace

Mat3 rotation_matrix(const Rotation& r) {
  const Mat3 qx = rotation_x(r.theta_x_deg);
  const Mat3 qz = rotation_z(r.theta_z_deg);
  switch (r.order) {
    case RotationOrder::X: return qx;
    case RotationOrder::Z: return qz;
    case RotationOrder::XZ: return matmul(qx, qz);
    case RotationOrder::ZX: return matmul(qz, qx);
  }
  return qx;
}

Matrix<double> apply_rotation(const Matrix<double>& frame, const Mat3& q) {
  if (frame.cols() != kChannels) throw Error(Errc::shape_mismatch, "frame must have 6 columns");
  Matrix<double> out(frame.rows(), kChannels);
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    const auto in = frame.row(r);
    auto o = out.row(r);
    for (std::size_t block = 0; block < kChannels; block += 3)
      for (std::size_t i = 0; i < 3; ++i)
        o[block + i] = q[i][0] * in[block] + q[i][1] * in[block + 1] + q[i][2] * in[block + 2];
  }
  return out;
}

Matrix<double> rotation_augment(const Matrix<double>& frame, std::mt19937_64& rng, const AugmentConfig& cfg) {
  std::bernoulli_distribution pick(cfg.probability);
  if (!pick(rng)) return frame;
  std::normal_distribution<double> theta(0.0, cfg.theta_std_deg);
  std::uniform_int_distribution<int> order(0, 3);
  Rotation r;
  r.theta_x_deg = theta(rng);
  r.theta_z_deg = theta(rng);
  r.order = static_cast<RotationOrder>(order(rng));
  return apply_rotation(frame, rotation_matrix(r));
}

// ---------------------------------------------------------------------------

namespace {

class ClassSampler {
 public:
  ClassSampler(std::vector<std::size_t> members, std::mt19937_64& rng) : members_(std::move(members)) {
    order_ = members_;
    std::shuffle(order_.begin(), order_.end(), rng);
  }

  std::size_t draw(std::mt19937_64& rng) {
    if (next_ < order_.size()) return order_[next_++];
    std::uniform_int_distribution<std::size_t> any(0, members_.size() - 1);
    return members_[any(rng)];
  }

 private:
  std::vector<std::size_t> members_;
  std::vector<std::size_t> order_;
  std::size_t next_ = 0;
};

}  // namespace

std::vector<Batch> make_balanced_batches(std::span<const Label> labels, std::size_t batch_size,
                                         std::mt19937_64& rng) {
  if (batch_size == 0 || batch_size % 2 != 0)
    throw Error(Errc::invalid_argument, "batch size must be a positive even number");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    switch (labels[i]) {
      case Label::Positive: pos.push_back(i); break;
      case Label::Negative: neg.push_back(i); break;
      case Label::NotApplicable:
        throw Error(Errc::invalid_argument, "training pool contains a not-applicable window");
    }
  }
  if (pos.empty() || neg.empty())
    throw Error(Errc::invalid_argument, "training pool needs both positive and negative windows");

  const std::size_t half = batch_size / 2;
  const std::size_t num_batches = (std::max(pos.size(), neg.size()) + half - 1) / half;
  ClassSampler pos_sampler(std::move(pos), rng);
  ClassSampler neg_sampler(std::move(neg), rng);

  std::vector<Batch> batches(num_batches);
  for (auto& batch : batches) {
    batch.reserve(batch_size);
    for (std::size_t i = 0; i < half; ++i) batch.push_back(pos_sampler.draw(rng));
    for (std::size_t i = 0; i < half; ++i) batch.push_back(neg_sampler.draw(rng));
    std::shuffle(batch.begin(), batch.end(), rng);
  }
  return batches;
}

std::vector<Batch> make_balanced_batches(std::span<const LabeledWindow> pool, std::size_t batch_size,
                                         std::mt19937_64& rng) {
  std::vector<Label> labels;
  labels.reserve(pool.size());
  for (const auto& w : pool) labels.push_back(w.label);
  return make_balanced_batches(labels, batch_size, rng);
}

// ---------------------------------------------------------------------------

void WindowPool::add_in_meal(std::shared_ptr<const ImuRecording> rec, std::span<const BiteAnnotation> bites,
                             const WindowConfig& cfg) {
  const std::size_t source = recordings_.size();
  const double fs = rec->sample_rate_hz();
  const std::size_t len = cfg.length_samples(fs);
  for (const auto& pos : window_positions(rec->size(), fs, cfg)) {
    entries_.push_back({source, pos.first, len, pos.end_time_s, false});
    labels_.push_back(assign_label(pos.end_time_s, bites, cfg));
  }
  recordings_.push_back(std::move(rec));
}

void WindowPool::add_free_living(std::shared_ptr<const ImuRecording> rec, std::span<const MealAnnotation> meals,
                                 const WindowConfig& cfg) {
  const std::size_t source = recordings_.size();
  const double fs = rec->sample_rate_hz();
  const std::size_t len = cfg.length_samples(fs);
  for (const auto& pos : window_positions(rec->size(), fs, cfg)) {
    const Label l = assign_label(pos.end_time_s, meals);
    if (l == Label::NotApplicable) continue;
    entries_.push_back({source, pos.first, len, pos.end_time_s, false});
    labels_.push_back(l);
  }
  recordings_.push_back(std::move(rec));
}

void WindowPool::add(LabeledWindow w) {
  entries_.push_back({owned_.size(), 0, w.frame.rows(), w.end_time_s, true});
  labels_.push_back(w.label);
  owned_.push_back(std::move(w.frame));
}

Matrix<double> WindowPool::frame(std::size_t i) const {
  const Entry& e = entries_[i];
  if (e.owned) return owned_[e.source];
  return recordings_[e.source]->frame(e.first, e.length);
}

std::size_t WindowPool::count(Label l) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

WindowPool WindowPool::subsample_negatives(std::size_t max_negatives, std::mt19937_64& rng) const {
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < size(); ++i)
    if (labels_[i] == Label::Negative) neg.push_back(i);
  std::vector<char> keep(size(), 1);
  if (neg.size() > max_negatives) {
    std::shuffle(neg.begin(), neg.end(), rng);
    for (std::size_t k = max_negatives; k < neg.size(); ++k) keep[neg[k]] = 0;
  }
  WindowPool out;
  out.recordings_ = recordings_;
  out.owned_ = owned_;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!keep[i]) continue;
    out.entries_.push_back(entries_[i]);
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

}  // namespace intake
