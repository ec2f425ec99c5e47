#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "intake/net/config.hpp"

namespace intake::net {

struct ConvSlot {
  std::size_t weight;  // offset of kernel x in x out tensor
  std::size_t bias;    // offset of out-length bias
  std::size_t kernel;
  std::size_t in;
  std::size_t out;
  bool pool;
};

struct LstmSlot {
  std::size_t input_weight;      // in x 4H, gate blocks ordered i, f, g, o
  std::size_t recurrent_weight;  // H x 4H
  std::size_t bias;              // 4H
  std::size_t in;
  std::size_t units;
};

struct DenseSlot {
  std::size_t weight;  // H
  std::size_t bias;    // 1
  std::size_t in;
};

struct TensorInfo {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset;
  std::size_t size;
};

/// Where each tensor lives inside the flat parameter vector.
class ParamLayout {
 public:
  ParamLayout() = default;
  explicit ParamLayout(const NetConfig& cfg);

  const std::vector<ConvSlot>& conv() const noexcept { return conv_; }
  const LstmSlot& lstm() const noexcept { return lstm_; }
  const DenseSlot& dense() const noexcept { return dense_; }
  std::size_t total() const noexcept { return total_; }
  const std::vector<TensorInfo>& tensors() const noexcept { return tensors_; }

 private:
  std::size_t add(std::string name, std::vector<std::size_t> shape);

  std::vector<ConvSlot> conv_;
  LstmSlot lstm_{};
  DenseSlot dense_{};
  std::size_t total_ = 0;
  std::vector<TensorInfo> tensors_;
};

/// All learnable weights in one flat vector, addressed through the layout.
template <typename T>
struct BasicModelParams {
  NetConfig config;
  ParamLayout layout;
  std::vector<T> values;

  BasicModelParams() = default;
  explicit BasicModelParams(NetConfig cfg)
      : config(std::move(cfg)), layout(config), values(layout.total(), T{}) {}

  const T* at(std::size_t offset) const noexcept { return values.data() + offset; }
  T* at(std::size_t offset) noexcept { return values.data() + offset; }

  template <typename U>
  BasicModelParams<U> cast() const {
    BasicModelParams<U> out;
    out.config = config;
    out.layout = layout;
    out.values.assign(values.begin(), values.end());
    return out;
  }

  friend bool operator==(const BasicModelParams& a, const BasicModelParams& b) {
    return a.config == b.config && a.values == b.values;
  }
};

using ModelParams = BasicModelParams<float>;

/// Glorot-uniform weights, zero biases, forget-gate bias 1.
ModelParams init_params(const NetConfig& cfg, std::uint64_t seed);

std::size_t count_params(const NetConfig& cfg);

template <typename T>
std::size_t count_params(const BasicModelParams<T>& p) {
  return p.values.size();
}

}  // namespace intake::net
