#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace intake {

std::vector<double> moving_average_taps(std::size_t length, double tap);

/// Windowed-sinc (Hamming) high-pass by spectral inversion of a unit-DC-gain
/// low-pass. High-pass linear-phase FIRs need an odd tap count, so an even
/// `length` is treated as the filter order and yields length + 1 taps.
std::vector<double> highpass_taps(std::size_t length, double cutoff_hz, double sample_rate_hz);

/// Sampled Gaussian normalised to unit sum. Even lengths are bumped to the
/// next odd length so the kernel has a centre tap.
std::vector<double> gaussian_taps(std::size_t length, double stddev);

/// "Same"-length convolution with zero padding:
///   out[n] = sum_k taps[k] * x[n + delay - k],  delay = (taps.size() - 1) / 2
/// which cancels the group delay of a symmetric (linear-phase) kernel.
std::vector<double> convolve_same(std::span<const double> x, std::span<const double> taps);

namespace serial {
std::vector<double> convolve_same(std::span<const double> x, std::span<const double> taps);
}  // namespace serial

/// Magnitude of the kernel's frequency response at `freq_hz`.
double frequency_response(std::span<const double> taps, double freq_hz, double sample_rate_hz);

}  // namespace intake
