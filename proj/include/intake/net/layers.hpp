#pragma once

// Building blocks of the conv/LSTM network. Tensors are row-major
// (time x channel). The OpenMP kernels split over time steps and fall back
// to a single thread for small inputs or inside an enclosing parallel
// region; the serial:: versions are straightforward loops kept as
// references for tests and benchmarks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "intake/parallel.hpp"

namespace intake::net {

template <typename T>
inline T hard_sigmoid(T x) {
  return std::clamp(T(0.2) * x + T(0.5), T(0), T(1));
}

// Derivative expressed through the activation value.
template <typename T>
inline T hard_sigmoid_grad(T y) {
  return (y > T(0) && y < T(1)) ? T(0.2) : T(0);
}

template <typename T>
inline T logistic(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

/// out = relu(conv_same(in, w) + b); w is kernel x cin x cout.
template <typename T>
void conv1d_relu_forward(const T* in, std::size_t len, std::size_t cin, const T* w, const T* b,
                         std::size_t kernel, std::size_t cout, T* out) {
  const auto pad = static_cast<std::ptrdiff_t>((kernel - 1) / 2);
  const auto n = static_cast<std::ptrdiff_t>(len);
  const bool big = len * kernel * cin * cout > kParallelGrain;
#pragma omp parallel for schedule(static) if (big)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    T* o = out + t * static_cast<std::ptrdiff_t>(cout);
    std::copy(b, b + cout, o);
    for (std::size_t k = 0; k < kernel; ++k) {
      const std::ptrdiff_t src = t + static_cast<std::ptrdiff_t>(k) - pad;
      if (src < 0 || src >= n) continue;
      const T* x = in + src * static_cast<std::ptrdiff_t>(cin);
      const T* wk = w + k * cin * cout;
      for (std::size_t ci = 0; ci < cin; ++ci) {
        const T xv = x[ci];
        const T* wr = wk + ci * cout;
        for (std::size_t co = 0; co < cout; ++co) o[co] += xv * wr[co];
      }
    }
    for (std::size_t co = 0; co < cout; ++co) o[co] = std::max(o[co], T(0));
  }
}

/// Backward of conv1d_relu_forward. `grad_out` is masked in place by the
/// ReLU derivative. Weight/bias gradients and grad_in (when non-null) are
/// accumulated.
template <typename T>
void conv1d_relu_backward(const T* in, std::size_t len, std::size_t cin, const T* w, std::size_t kernel,
                          std::size_t cout, const T* out, T* grad_out, T* grad_w, T* grad_b, T* grad_in) {
  const auto pad = static_cast<std::ptrdiff_t>((kernel - 1) / 2);
  const auto n = static_cast<std::ptrdiff_t>(len);
  for (std::size_t i = 0; i < len * cout; ++i)
    if (!(out[i] > T(0))) grad_out[i] = T(0);

  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const T* g = grad_out + t * static_cast<std::ptrdiff_t>(cout);
    for (std::size_t co = 0; co < cout; ++co) grad_b[co] += g[co];
    for (std::size_t k = 0; k < kernel; ++k) {
      const std::ptrdiff_t src = t + static_cast<std::ptrdiff_t>(k) - pad;
      if (src < 0 || src >= n) continue;
      const T* x = in + src * static_cast<std::ptrdiff_t>(cin);
      T* gx = grad_in ? grad_in + src * static_cast<std::ptrdiff_t>(cin) : nullptr;
      const T* wk = w + k * cin * cout;
      T* gwk = grad_w + k * cin * cout;
      for (std::size_t ci = 0; ci < cin; ++ci) {
        const T xv = x[ci];
        const T* wr = wk + ci * cout;
        T* gwr = gwk + ci * cout;
        T acc = T(0);
        for (std::size_t co = 0; co < cout; ++co) {
          gwr[co] += xv * g[co];
          acc += wr[co] * g[co];
        }
        if (gx) gx[ci] += acc;
      }
    }
  }
}

/// x2 max-pool over time. `arg` records which of the two rows won (first on
/// ties) and may be null at inference.
template <typename T>
void maxpool2_forward(const T* in, std::size_t len, std::size_t ch, T* out, std::uint8_t* arg) {
  const std::size_t out_len = len / 2;
  for (std::size_t t = 0; t < out_len; ++t) {
    const T* a = in + (2 * t) * ch;
    const T* b = a + ch;
    T* o = out + t * ch;
    for (std::size_t c = 0; c < ch; ++c) {
      const bool second = b[c] > a[c];
      o[c] = second ? b[c] : a[c];
      if (arg) arg[t * ch + c] = second ? 1 : 0;
    }
  }
}

template <typename T>
void maxpool2_backward(const T* grad_out, std::size_t out_len, std::size_t ch, const std::uint8_t* arg,
                       T* grad_in) {
  for (std::size_t t = 0; t < out_len; ++t)
    for (std::size_t c = 0; c < ch; ++c)
      grad_in[(2 * t + arg[t * ch + c]) * ch + c] += grad_out[t * ch + c];
}

/// Gate pre-activations a = b + x * Wx + h * Wh for one step; gates are laid
/// out as four blocks of H (input, forget, candidate, output).
template <typename T>
inline void lstm_preactivation(const T* x, std::size_t in, const T* h_prev, std::size_t units, const T* wx,
                               const T* wh, const T* b, T* a) {
  const std::size_t g4 = 4 * units;
  std::copy(b, b + g4, a);
  for (std::size_t i = 0; i < in; ++i) {
    const T xv = x[i];
    if (xv == T(0)) continue;
    const T* wr = wx + i * g4;
    for (std::size_t g = 0; g < g4; ++g) a[g] += xv * wr[g];
  }
  if (!h_prev) return;
  for (std::size_t j = 0; j < units; ++j) {
    const T hv = h_prev[j];
    const T* wr = wh + j * g4;
    for (std::size_t g = 0; g < g4; ++g) a[g] += hv * wr[g];
  }
}

/// Activates gates in place and advances the cell: returns c_t and h_t.
template <typename T>
inline void lstm_cell(T* gates, std::size_t units, const T* c_prev, T* c, T* h) {
  T* gi = gates;
  T* gf = gates + units;
  T* gg = gates + 2 * units;
  T* go = gates + 3 * units;
  for (std::size_t u = 0; u < units; ++u) {
    gi[u] = hard_sigmoid(gi[u]);
    gf[u] = hard_sigmoid(gf[u]);
    gg[u] = std::tanh(gg[u]);
    go[u] = hard_sigmoid(go[u]);
    const T cp = c_prev ? c_prev[u] : T(0);
    c[u] = gf[u] * cp + gi[u] * gg[u];
    h[u] = go[u] * std::tanh(c[u]);
  }
}

namespace serial {

template <typename T>
void conv1d_relu_forward(const T* in, std::size_t len, std::size_t cin, const T* w, const T* b,
                         std::size_t kernel, std::size_t cout, T* out) {
  const auto pad = static_cast<std::ptrdiff_t>((kernel - 1) / 2);
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t co = 0; co < cout; ++co) {
      T acc = b[co];
      for (std::size_t k = 0; k < kernel; ++k) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + k) - pad;
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(len)) continue;
        for (std::size_t ci = 0; ci < cin; ++ci)
          acc += in[static_cast<std::size_t>(src) * cin + ci] * w[(k * cin + ci) * cout + co];
      }
      out[t * cout + co] = acc > T(0) ? acc : T(0);
    }
  }
}

}  // namespace serial

}  // namespace intake::net
