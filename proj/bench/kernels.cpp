// Serial reference kernels against their OpenMP counterparts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "intake/evaluate.hpp"
#include "intake/filters.hpp"
#include "intake/imu.hpp"
#include "intake/meal_localize.hpp"
#include "intake/net/layers.hpp"
#include "intake/net/params.hpp"
#include "intake/net/train.hpp"

namespace {

using namespace intake;

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

ImuRecording noisy_recording(std::size_t m) {
  const auto v = noise(m * 6, 7);
  std::vector<ImuSample> s(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c = 0; c < 6; ++c) s[i][c] = v[i * 6 + c];
  return ImuRecording(std::move(s), 100.0, Hand::Right, "g;rad/s");
}

// One hour at 100 Hz through the 513-tap high-pass.
template <bool Serial>
void BM_convolve_same(benchmark::State& state) {
  const auto x = noise(360000, 1);
  const auto taps = noise(513, 2);
  for (auto _ : state) {
    auto y = Serial ? serial::convolve_same(x, taps) : convolve_same(x, taps);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_convolve_same<true>)->Name("convolve_same/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_same<false>)->Name("convolve_same/omp")->Unit(benchmark::kMillisecond);

// A 12 h day with dense eating: one bite every 10 s.
template <bool Serial>
void BM_smooth_close(benchmark::State& state) {
  const double fs = 100.0, duration = 12 * 3600.0;
  BiteSet bites;
  for (double t = 5.0; t < duration; t += 10.0) bites.timestamps_s.push_back(t);
  const auto s = impulse_train(bites, duration, fs);
  const LocalizerConfig cfg;
  for (auto _ : state) {
    auto y = Serial ? serial::smooth_close(s, cfg, fs) : smooth_close(s, cfg, fs);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_smooth_close<true>)->Name("smooth_close/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_smooth_close<false>)->Name("smooth_close/omp")->Unit(benchmark::kMillisecond);

template <bool Serial>
void BM_motion_energy(benchmark::State& state) {
  const auto rec = noisy_recording(360000);
  for (auto _ : state) {
    auto y = Serial ? serial::wrist_motion_energy(rec, 2.0) : wrist_motion_energy(rec, 2.0);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_motion_energy<true>)->Name("wrist_motion_energy/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_motion_energy<false>)->Name("wrist_motion_energy/omp")->Unit(benchmark::kMillisecond);

// Second conv layer of the full network on a 5 s window.
template <bool Serial>
void BM_conv1d(benchmark::State& state) {
  const std::size_t len = 250, cin = 32, cout = 64, kernel = 3;
  std::vector<float> in(len * cin), w(kernel * cin * cout), b(cout), out(len * cout);
  const auto r = noise(in.size() + w.size(), 3);
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = static_cast<float>(r[i]);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<float>(r[in.size() + i]) * 0.1f;
  for (auto _ : state) {
    if constexpr (Serial)
      net::serial::conv1d_relu_forward(in.data(), len, cin, w.data(), b.data(), kernel, cout, out.data());
    else
      net::conv1d_relu_forward(in.data(), len, cin, w.data(), b.data(), kernel, cout, out.data());
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_conv1d<true>)->Name("conv1d_relu_forward/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_conv1d<false>)->Name("conv1d_relu_forward/omp")->Unit(benchmark::kMicrosecond);

// One balanced mini-batch of 32 windows on the full network.
template <bool Serial>
void BM_batch_gradient(benchmark::State& state) {
  const auto params = net::init_params(net::NetConfig{}, 1);
  std::vector<Matrix<float>> frames;
  std::vector<double> targets;
  for (std::size_t i = 0; i < 32; ++i) {
    const auto v = noise(500 * 6, 10 + i);
    frames.emplace_back(500, 6, std::vector<float>(v.begin(), v.end()));
    targets.push_back(static_cast<double>(i % 2));
  }
  const std::vector<std::vector<float>> masks;
  std::vector<float> grad;
  for (auto _ : state) {
    const double loss = Serial ? net::serial::batch_gradient(params, frames, targets, masks, grad)
                               : net::batch_gradient(params, frames, targets, masks, grad);
    benchmark::DoNotOptimize(loss);
  }
}
BENCHMARK(BM_batch_gradient<true>)->Name("batch_gradient/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_batch_gradient<false>)->Name("batch_gradient/omp")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
