#include "intake/net/train.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "intake/error.hpp"
#include "intake/net/network.hpp"

namespace intake::net {

double bce_loss(std::span<const double> preds, std::span<const double> targets) {
  if (preds.size() != targets.size()) throw Error(Errc::shape_mismatch, "predictions and targets differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) sum += bce_term(preds[i], targets[i]);
  return sum;
}

namespace {

// Fixed partition of a batch; summing the partial gradients in chunk order
// keeps results identical for any thread count.
constexpr std::size_t kChunks = 16;

template <typename T>
double window_gradient(const BasicModelParams<T>& p, const Matrix<T>& frame, double target,
                       const std::vector<T>& mask, std::span<T> grad) {
  const WindowTrace<T> tr = forward_trace(p, frame, mask);
  backward_window(p, tr, static_cast<T>(static_cast<double>(tr.prob) - target), grad);
  return bce_term(static_cast<double>(tr.prob), target);
}

}  // namespace

template <typename T>
double batch_gradient(const BasicModelParams<T>& p, const std::vector<Matrix<T>>& frames,
                      const std::vector<double>& targets, const std::vector<std::vector<T>>& masks,
                      std::vector<T>& grad) {
  const std::size_t n = frames.size();
  const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(n, 1));
  std::vector<std::vector<T>> partial(chunks, std::vector<T>(p.values.size(), T(0)));
  std::vector<double> loss(chunks, 0.0);
  const std::vector<T> none;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * n / chunks;
    const std::size_t hi = (c + 1) * n / chunks;
    for (std::size_t i = lo; i < hi; ++i)
      loss[c] += window_gradient(p, frames[i], targets[i], masks.empty() ? none : masks[i], std::span<T>(partial[c]));
  }

  grad.assign(p.values.size(), T(0));
  double total = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += partial[c][k];
    total += loss[c];
  }
  return total;
}

namespace serial {

template <typename T>
double batch_gradient(const BasicModelParams<T>& p, const std::vector<Matrix<T>>& frames,
                      const std::vector<double>& targets, const std::vector<std::vector<T>>& masks,
                      std::vector<T>& grad) {
  grad.assign(p.values.size(), T(0));
  const std::vector<T> none;
  double total = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i)
    total += window_gradient(p, frames[i], targets[i], masks.empty() ? none : masks[i], std::span<T>(grad));
  return total;
}

template double batch_gradient(const BasicModelParams<float>&, const std::vector<Matrix<float>>&,
                               const std::vector<double>&, const std::vector<std::vector<float>>&,
                               std::vector<float>&);
template double batch_gradient(const BasicModelParams<double>&, const std::vector<Matrix<double>>&,
                               const std::vector<double>&, const std::vector<std::vector<double>>&,
                               std::vector<double>&);

}  // namespace serial

template double batch_gradient(const BasicModelParams<float>&, const std::vector<Matrix<float>>&,
                               const std::vector<double>&, const std::vector<std::vector<float>>&,
                               std::vector<float>&);
template double batch_gradient(const BasicModelParams<double>&, const std::vector<Matrix<double>>&,
                               const std::vector<double>&, const std::vector<std::vector<double>>&,
                               std::vector<double>&);

TrainResult train(ModelParams params, const WindowPool& pool, const TrainConfig& tc, bool augment,
                  const EpochCallback& on_epoch) {
  tc.validate();
  params.config.validate();
  std::mt19937_64 rng(tc.seed);
  const std::size_t hu = params.config.lstm_units;
  const double rate = params.config.dropout_rate;
  const auto decay = static_cast<float>(tc.rmsprop_decay);
  const auto lr = static_cast<float>(tc.learning_rate);
  const auto eps = static_cast<float>(tc.rmsprop_epsilon);

  std::vector<float> cache(params.values.size(), 0.0f);
  std::vector<float> grad;
  TrainResult result;

  for (std::size_t epoch = 0; epoch < tc.epochs; ++epoch) {
    const auto batches = make_balanced_batches(pool.labels(), tc.batch_size, rng);
    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (const auto& batch : batches) {
      std::vector<Matrix<float>> frames;
      std::vector<double> targets;
      std::vector<std::vector<float>> masks;
      frames.reserve(batch.size());
      for (std::size_t idx : batch) {
        Matrix<double> f = pool.frame(idx);
        if (augment) f = rotation_augment(f, rng);
        frames.push_back(f.cast<float>());
        targets.push_back(pool.label(idx) == Label::Positive ? 1.0 : 0.0);
        if (rate > 0.0) {
          std::bernoulli_distribution keep(1.0 - rate);
          const auto scale = static_cast<float>(1.0 / (1.0 - rate));
          std::vector<float> m(hu);
          for (auto& v : m) v = keep(rng) ? scale : 0.0f;
          masks.push_back(std::move(m));
        }
      }
      epoch_loss += batch_gradient(params, frames, targets, masks, grad);
      seen += batch.size();

      for (std::size_t k = 0; k < grad.size(); ++k) {
        cache[k] = decay * cache[k] + (1.0f - decay) * grad[k] * grad[k];
        params.values[k] -= lr * grad[k] / (std::sqrt(cache[k]) + eps);
      }
    }
    const double mean = epoch_loss / static_cast<double>(std::max<std::size_t>(seen, 1));
    result.epoch_loss.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  result.params = std::move(params);
  return result;
}

}  // namespace intake::net
