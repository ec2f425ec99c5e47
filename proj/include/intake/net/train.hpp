#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "intake/net/config.hpp"
#include "intake/net/params.hpp"
#include "intake/windowing.hpp"

namespace intake::net {

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_loss;  // mean per-window loss of each epoch
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

/// RMSProp on the summed BCE of balanced mini-batches. Each window gets an
/// independent 50% chance of orientation augmentation when `augment` is
/// set. Results depend only on the seed, not on the thread count.
TrainResult train(ModelParams params, const WindowPool& pool, const TrainConfig& tc, bool augment,
                  const EpochCallback& on_epoch = {});

/// Gradient of the summed BCE over `frames` (fixed dropout masks may be
/// supplied per frame). Exposed for the benchmarks.
template <typename T>
double batch_gradient(const BasicModelParams<T>& p, const std::vector<Matrix<T>>& frames,
                      const std::vector<double>& targets, const std::vector<std::vector<T>>& masks,
                      std::vector<T>& grad);

namespace serial {
template <typename T>
double batch_gradient(const BasicModelParams<T>& p, const std::vector<Matrix<T>>& frames,
                      const std::vector<double>& targets, const std::vector<std::vector<T>>& masks,
                      std::vector<T>& grad);
}  // namespace serial

}  // namespace intake::net
