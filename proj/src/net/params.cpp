#include "intake/net/params.hpp"

#include <cmath>
#include <random>

namespace intake::net {

std::size_t ParamLayout::add(std::string name, std::vector<std::size_t> shape) {
  std::size_t size = 1;
  for (auto d : shape) size *= d;
  const std::size_t offset = total_;
  tensors_.push_back({std::move(name), std::move(shape), offset, size});
  total_ += size;
  return offset;
}

ParamLayout::ParamLayout(const NetConfig& cfg) {
  cfg.validate();
  std::size_t in = cfg.input_channels;
  for (std::size_t l = 0; l < cfg.conv_filters.size(); ++l) {
    const std::size_t k = cfg.conv_kernels[l];
    const std::size_t out = cfg.conv_filters[l];
    const std::string prefix = "conv" + std::to_string(l);
    ConvSlot slot{};
    slot.weight = add(prefix + ".weight", {k, in, out});
    slot.bias = add(prefix + ".bias", {out});
    slot.kernel = k;
    slot.in = in;
    slot.out = out;
    slot.pool = cfg.pool_after[l];
    conv_.push_back(slot);
    in = out;
  }
  const std::size_t h = cfg.lstm_units;
  lstm_.input_weight = add("lstm.input_weight", {in, 4 * h});
  lstm_.recurrent_weight = add("lstm.recurrent_weight", {h, 4 * h});
  lstm_.bias = add("lstm.bias", {4 * h});
  lstm_.in = in;
  lstm_.units = h;
  dense_.weight = add("dense.weight", {h});
  dense_.bias = add("dense.bias", {1});
  dense_.in = h;
}

std::size_t count_params(const NetConfig& cfg) { return ParamLayout(cfg).total(); }

ModelParams init_params(const NetConfig& cfg, std::uint64_t seed) {
  ModelParams p(cfg);
  std::mt19937_64 rng(seed);

  auto glorot = [&](std::size_t offset, std::size_t count, double fan_in, double fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (std::size_t i = 0; i < count; ++i) p.values[offset + i] = static_cast<float>(u(rng));
  };

  for (const auto& c : p.layout.conv()) {
    glorot(c.weight, c.kernel * c.in * c.out, static_cast<double>(c.kernel * c.in),
           static_cast<double>(c.kernel * c.out));
  }
  const auto& l = p.layout.lstm();
  const double h = static_cast<double>(l.units);
  glorot(l.input_weight, l.in * 4 * l.units, static_cast<double>(l.in), 4.0 * h);
  glorot(l.recurrent_weight, l.units * 4 * l.units, h, 4.0 * h);
  for (std::size_t u = 0; u < l.units; ++u) p.values[l.bias + l.units + u] = 1.0f;  // forget gate
  const auto& d = p.layout.dense();
  glorot(d.weight, d.in, static_cast<double>(d.in), 1.0);
  return p;
}

}  // namespace intake::net
