#include "intake/net/config.hpp"

#include <algorithm>

#include "intake/error.hpp"

namespace intake::net {

NetConfig NetConfig::reduced(std::vector<std::size_t> filters, std::size_t lstm_units) {
  NetConfig cfg;
  cfg.conv_filters = std::move(filters);
  cfg.lstm_units = lstm_units;
  cfg.validate();
  return cfg;
}

void NetConfig::validate() const {
  if (conv_filters.empty()) throw Error(Errc::invalid_argument, "network needs at least one conv layer");
  if (conv_filters.size() != conv_kernels.size() || conv_filters.size() != pool_after.size())
    throw Error(Errc::invalid_argument, "conv filters, kernels and pooling flags must have equal length");
  if (std::count(pool_after.begin(), pool_after.end(), true) != 2)
    throw Error(Errc::invalid_argument, "exactly two conv layers must be followed by pooling");
  for (std::size_t i = 0; i < conv_filters.size(); ++i)
    if (conv_filters[i] == 0 || conv_kernels[i] == 0)
      throw Error(Errc::invalid_argument, "conv filters and kernels must be positive");
  if (input_channels == 0 || lstm_units == 0)
    throw Error(Errc::invalid_argument, "input channels and LSTM units must be positive");
  if (dense_units != 1) throw Error(Errc::invalid_argument, "the output layer has exactly one unit");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
    throw Error(Errc::invalid_argument, "dropout rate must lie in [0, 1)");
}

std::size_t NetConfig::downsample() const { return 4; }

std::size_t NetConfig::min_input_length() const { return downsample(); }

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw Error(Errc::invalid_argument, "learning rate must be non-negative");
  if (epochs < 1) throw Error(Errc::invalid_argument, "epochs must be >= 1");
  if (batch_size == 0 || batch_size % 2 != 0)
    throw Error(Errc::invalid_argument, "batch size must be a positive even number");
  if (!(rmsprop_decay >= 0.0 && rmsprop_decay < 1.0) || !(rmsprop_epsilon > 0.0))
    throw Error(Errc::invalid_argument, "invalid RMSProp constants");
}

}  // namespace intake::net
