#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "intake/net/params.hpp"

namespace intake::net {

inline constexpr std::uint8_t kWeightFormatVersion = 1;

// Layout (little-endian):
//   "INTK" | u8 version | u32 n_conv | n_conv x (u32 filters, u32 kernel, u8 pool)
//   | u32 input_channels | u32 lstm_units | u32 dense_units | f64 dropout
//   | u64 n_values | n_values x f32
std::vector<std::uint8_t> serialize_params(const ModelParams& p);
ModelParams deserialize_params(std::span<const std::uint8_t> bytes);

void save_params(const std::filesystem::path& path, const ModelParams& p);
ModelParams load_params(const std::filesystem::path& path);

}  // namespace intake::net
