#include "intake/net/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "intake/error.hpp"
#include "intake/io.hpp"

namespace intake::net {

namespace {

constexpr std::uint8_t kMagic[4] = {'I', 'N', 'T', 'K'};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::uint64_t le(int bytes) {
    if (remaining() < static_cast<std::size_t>(bytes)) throw Error(Errc::truncated_stream, "truncated stream");
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_params(const ModelParams& p) {
  Writer w;
  for (auto b : kMagic) w.u8(b);
  w.u8(kWeightFormatVersion);
  const auto& cfg = p.config;
  w.u32(static_cast<std::uint32_t>(cfg.conv_filters.size()));
  for (std::size_t l = 0; l < cfg.conv_filters.size(); ++l) {
    w.u32(static_cast<std::uint32_t>(cfg.conv_filters[l]));
    w.u32(static_cast<std::uint32_t>(cfg.conv_kernels[l]));
    w.u8(cfg.pool_after[l] ? 1 : 0);
  }
  w.u32(static_cast<std::uint32_t>(cfg.input_channels));
  w.u32(static_cast<std::uint32_t>(cfg.lstm_units));
  w.u32(static_cast<std::uint32_t>(cfg.dense_units));
  w.f64(cfg.dropout_rate);
  w.u64(p.values.size());
  for (float v : p.values) w.f32(v);
  return w.take();
}

ModelParams deserialize_params(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (auto b : kMagic)
    if (r.u8() != b) throw Error(Errc::bad_magic, "not a weight file (bad magic)");
  const auto version = r.u8();
  if (version != kWeightFormatVersion)
    throw Error(Errc::version_mismatch, "version mismatch: file has " + std::to_string(version) + ", expected " +
                                            std::to_string(kWeightFormatVersion));
  NetConfig cfg;
  const auto n_conv = r.u32();
  if (n_conv > 64) throw Error(Errc::shape_mismatch, "shape mismatch: implausible conv layer count");
  cfg.conv_filters.clear();
  cfg.conv_kernels.clear();
  cfg.pool_after.clear();
  for (std::uint32_t l = 0; l < n_conv; ++l) {
    cfg.conv_filters.push_back(r.u32());
    cfg.conv_kernels.push_back(r.u32());
    cfg.pool_after.push_back(r.u8() != 0);
  }
  cfg.input_channels = r.u32();
  cfg.lstm_units = r.u32();
  cfg.dense_units = r.u32();
  cfg.dropout_rate = r.f64();
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(Errc::shape_mismatch, std::string("shape mismatch: ") + e.what());
  }
  ModelParams p(cfg);
  const auto count = r.u64();
  if (count != p.values.size())
    throw Error(Errc::shape_mismatch, "shape mismatch: file holds " + std::to_string(count) + " values, config needs " +
                                          std::to_string(p.values.size()));
  if (r.remaining() < count * 4) throw Error(Errc::truncated_stream, "truncated stream");
  for (auto& v : p.values) v = r.f32();
  return p;
}

void save_params(const std::filesystem::path& path, const ModelParams& p) {
  const auto bytes = serialize_params(p);
  write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

ModelParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_params(bytes);
}

}  // namespace intake::net
