#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace intake::net {

/// Conv stack -> single LSTM -> one sigmoid unit. Exactly two of the conv
/// layers must be followed by a x2 max-pool, so the output timeline runs at
/// a quarter of the input rate.
struct NetConfig {
  std::vector<std::size_t> conv_filters{32, 64, 128};
  std::vector<std::size_t> conv_kernels{5, 3, 3};
  std::vector<bool> pool_after{true, true, false};
  std::size_t input_channels = 6;
  std::size_t lstm_units = 128;
  std::size_t dense_units = 1;
  double dropout_rate = 0.5;

  /// Same topology with fewer filters / cells, for desk-scale experiments.
  static NetConfig reduced(std::vector<std::size_t> filters, std::size_t lstm_units);

  void validate() const;
  std::size_t downsample() const;          // 4
  std::size_t min_input_length() const;    // shortest input giving one output step

  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 128;
  std::size_t epochs = 5;
  double rmsprop_decay = 0.9;
  double rmsprop_epsilon = 1e-7;
  std::uint64_t seed = 0;

  void validate() const;
};

}  // namespace intake::net
