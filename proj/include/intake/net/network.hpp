#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "intake/error.hpp"
#include "intake/matrix.hpp"
#include "intake/net/layers.hpp"
#include "intake/net/params.hpp"

namespace intake::net {

/// Activations kept from a window forward pass for backpropagation.
template <typename T>
struct WindowTrace {
  std::vector<Matrix<T>> conv_in;    // input of each conv layer
  std::vector<Matrix<T>> conv_out;   // post-ReLU output of each conv layer
  std::vector<std::vector<std::uint8_t>> pool_arg;
  Matrix<T> lstm_in;                 // N x in
  Matrix<T> gates;                   // N x 4H, activated
  Matrix<T> cells;                   // N x H
  Matrix<T> hidden;                  // N x H
  std::vector<T> dropout_mask;       // H scale factors, empty when inactive
  T logit{};
  T prob{};
};

namespace detail {

template <typename T>
Matrix<T> truncate_input(const Matrix<T>& x, const NetConfig& cfg) {
  if (x.cols() != cfg.input_channels)
    throw Error(Errc::shape_mismatch, "input has " + std::to_string(x.cols()) + " channels, expected " +
                                          std::to_string(cfg.input_channels));
  if (x.rows() < cfg.min_input_length()) throw Error(Errc::too_short, "input too short");
  const std::size_t rows = x.rows() - x.rows() % cfg.downsample();
  if (rows == x.rows()) return x;
  return Matrix<T>(rows, x.cols(), std::vector<T>(x.data(), x.data() + rows * x.cols()));
}

// Runs the conv stack; when trace is non-null the intermediate tensors are
// stored in it.
template <typename T>
Matrix<T> conv_stack(const BasicModelParams<T>& p, Matrix<T> x, WindowTrace<T>* trace) {
  for (const auto& c : p.layout.conv()) {
    Matrix<T> y(x.rows(), c.out);
    conv1d_relu_forward(x.data(), x.rows(), c.in, p.at(c.weight), p.at(c.bias), c.kernel, c.out, y.data());
    std::vector<std::uint8_t> arg;
    Matrix<T> next;
    if (c.pool) {
      next = Matrix<T>(y.rows() / 2, c.out);
      if (trace) arg.resize(next.rows() * c.out);
      maxpool2_forward(y.data(), y.rows(), c.out, next.data(), trace ? arg.data() : nullptr);
    }
    if (trace) {
      trace->conv_in.push_back(std::move(x));
      trace->pool_arg.push_back(std::move(arg));
      x = c.pool ? std::move(next) : y;
      trace->conv_out.push_back(std::move(y));
    } else {
      x = c.pool ? std::move(next) : std::move(y);
    }
  }
  return x;
}

}  // namespace detail

/// Per-step bite probabilities for a whole recording (inference mode,
/// fresh LSTM state, no dropout). Trailing samples beyond a multiple of 4
/// are dropped; output length is floor(M / 4).
template <typename T>
std::vector<T> forward_sequence(const BasicModelParams<T>& p, const Matrix<T>& input) {
  Matrix<T> z = detail::conv_stack(p, detail::truncate_input(input, p.config), static_cast<WindowTrace<T>*>(nullptr));
  const auto& l = p.layout.lstm();
  const auto& d = p.layout.dense();
  const std::size_t h_units = l.units;
  std::vector<T> a(4 * h_units), c(h_units, T(0)), h(h_units, T(0)), c_next(h_units), h_next(h_units);
  std::vector<T> out(z.rows());
  const T* wd = p.at(d.weight);
  const T bd = *p.at(d.bias);
  for (std::size_t t = 0; t < z.rows(); ++t) {
    lstm_preactivation(z.data() + t * l.in, l.in, t == 0 ? nullptr : h.data(), h_units, p.at(l.input_weight),
                       p.at(l.recurrent_weight), p.at(l.bias), a.data());
    lstm_cell(a.data(), h_units, c.data(), c_next.data(), h_next.data());
    std::swap(c, c_next);
    std::swap(h, h_next);
    T logit = bd;
    for (std::size_t u = 0; u < h_units; ++u) logit += wd[u] * h[u];
    out[t] = logistic(logit);
  }
  return out;
}

/// Window forward pass that keeps what backward_window needs. The dense
/// input is multiplied by `dropout_mask` when it is non-empty.
template <typename T>
WindowTrace<T> forward_trace(const BasicModelParams<T>& p, const Matrix<T>& frame, std::vector<T> dropout_mask = {}) {
  WindowTrace<T> tr;
  tr.lstm_in = detail::conv_stack(p, detail::truncate_input(frame, p.config), &tr);
  const auto& l = p.layout.lstm();
  const auto& d = p.layout.dense();
  const std::size_t steps = tr.lstm_in.rows();
  const std::size_t hu = l.units;
  tr.gates = Matrix<T>(steps, 4 * hu);
  tr.cells = Matrix<T>(steps, hu);
  tr.hidden = Matrix<T>(steps, hu);
  for (std::size_t t = 0; t < steps; ++t) {
    T* a = tr.gates.row(t).data();
    lstm_preactivation(tr.lstm_in.row(t).data(), l.in, t == 0 ? nullptr : tr.hidden.row(t - 1).data(), hu,
                       p.at(l.input_weight), p.at(l.recurrent_weight), p.at(l.bias), a);
    lstm_cell(a, hu, t == 0 ? nullptr : tr.cells.row(t - 1).data(), tr.cells.row(t).data(),
              tr.hidden.row(t).data());
  }
  if (!dropout_mask.empty() && dropout_mask.size() != hu)
    throw Error(Errc::shape_mismatch, "dropout mask size must equal LSTM units");
  tr.dropout_mask = std::move(dropout_mask);
  const T* h_last = tr.hidden.row(steps - 1).data();
  const T* wd = p.at(d.weight);
  T logit = *p.at(d.bias);
  for (std::size_t u = 0; u < hu; ++u)
    logit += wd[u] * h_last[u] * (tr.dropout_mask.empty() ? T(1) : tr.dropout_mask[u]);
  tr.logit = logit;
  tr.prob = logistic(logit);
  return tr;
}

/// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(logit).
template <typename T>
void backward_window(const BasicModelParams<T>& p, const WindowTrace<T>& tr, T grad_logit, std::span<T> grad) {
  const auto& l = p.layout.lstm();
  const auto& d = p.layout.dense();
  const std::size_t steps = tr.hidden.rows();
  const std::size_t hu = l.units;
  const std::size_t g4 = 4 * hu;

  // dense
  std::vector<T> dh(hu), dc(hu, T(0));
  {
    const T* h_last = tr.hidden.row(steps - 1).data();
    const T* wd = p.at(d.weight);
    T* gwd = grad.data() + d.weight;
    for (std::size_t u = 0; u < hu; ++u) {
      const T m = tr.dropout_mask.empty() ? T(1) : tr.dropout_mask[u];
      gwd[u] += grad_logit * m * h_last[u];
      dh[u] = grad_logit * wd[u] * m;
    }
    grad[d.bias] += grad_logit;
  }

  // LSTM, backpropagation through time
  Matrix<T> dz(steps, l.in, T(0));
  std::vector<T> da(g4), dh_prev(hu), dc_prev(hu);
  const T* wx = p.at(l.input_weight);
  const T* wh = p.at(l.recurrent_weight);
  T* gwx = grad.data() + l.input_weight;
  T* gwh = grad.data() + l.recurrent_weight;
  T* gb = grad.data() + l.bias;
  for (std::size_t step = steps; step-- > 0;) {
    const T* gates = tr.gates.row(step).data();
    const T* gi = gates;
    const T* gf = gates + hu;
    const T* gg = gates + 2 * hu;
    const T* go = gates + 3 * hu;
    const T* c = tr.cells.row(step).data();
    const T* c_prev = step > 0 ? tr.cells.row(step - 1).data() : nullptr;
    for (std::size_t u = 0; u < hu; ++u) {
      const T tc = std::tanh(c[u]);
      const T d_o = dh[u] * tc;
      const T d_c = dc[u] + dh[u] * go[u] * (T(1) - tc * tc);
      const T cp = c_prev ? c_prev[u] : T(0);
      da[u] = d_c * gg[u] * hard_sigmoid_grad(gi[u]);
      da[hu + u] = d_c * cp * hard_sigmoid_grad(gf[u]);
      da[2 * hu + u] = d_c * gi[u] * (T(1) - gg[u] * gg[u]);
      da[3 * hu + u] = d_o * hard_sigmoid_grad(go[u]);
      dc_prev[u] = d_c * gf[u];
    }
    for (std::size_t g = 0; g < g4; ++g) gb[g] += da[g];

    const T* x = tr.lstm_in.row(step).data();
    T* dx = dz.row(step).data();
    for (std::size_t i = 0; i < l.in; ++i) {
      const T xv = x[i];
      const T* wr = wx + i * g4;
      T* gr = gwx + i * g4;
      T acc = T(0);
      for (std::size_t g = 0; g < g4; ++g) {
        gr[g] += xv * da[g];
        acc += wr[g] * da[g];
      }
      dx[i] = acc;
    }
    std::fill(dh_prev.begin(), dh_prev.end(), T(0));
    if (step > 0) {
      const T* h_prev = tr.hidden.row(step - 1).data();
      for (std::size_t j = 0; j < hu; ++j) {
        const T hv = h_prev[j];
        const T* wr = wh + j * g4;
        T* gr = gwh + j * g4;
        T acc = T(0);
        for (std::size_t g = 0; g < g4; ++g) {
          gr[g] += hv * da[g];
          acc += wr[g] * da[g];
        }
        dh_prev[j] = acc;
      }
    }
    std::swap(dh, dh_prev);
    std::swap(dc, dc_prev);
  }

  // conv stack, last layer first
  Matrix<T> upstream = std::move(dz);
  const auto& convs = p.layout.conv();
  for (std::size_t li = convs.size(); li-- > 0;) {
    const auto& c = convs[li];
    const Matrix<T>& y = tr.conv_out[li];
    Matrix<T> dy(y.rows(), c.out, T(0));
    if (c.pool) {
      maxpool2_backward(upstream.data(), upstream.rows(), c.out, tr.pool_arg[li].data(), dy.data());
    } else {
      dy = std::move(upstream);
    }
    const Matrix<T>& x = tr.conv_in[li];
    Matrix<T> dx;
    if (li > 0) dx = Matrix<T>(x.rows(), c.in, T(0));
    conv1d_relu_backward(x.data(), x.rows(), c.in, p.at(c.weight), c.kernel, c.out, y.data(), dy.data(),
                         grad.data() + c.weight, grad.data() + c.bias, li > 0 ? dx.data() : nullptr);
    upstream = std::move(dx);
  }
}

/// Bite probability for one window. In training mode the dense input is
/// dropped out (inverted dropout, rate from the config) using `rng`.
template <typename T>
T forward_window(const BasicModelParams<T>& p, const Matrix<T>& frame, bool training = false,
                 std::mt19937_64* rng = nullptr) {
  std::vector<T> mask;
  if (training && p.config.dropout_rate > 0.0) {
    if (!rng) throw Error(Errc::invalid_argument, "training-mode forward pass needs an rng");
    std::bernoulli_distribution keep(1.0 - p.config.dropout_rate);
    const T scale = T(1.0 / (1.0 - p.config.dropout_rate));
    mask.resize(p.config.lstm_units);
    for (auto& m : mask) m = keep(*rng) ? scale : T(0);
  }
  return forward_trace(p, frame, std::move(mask)).prob;
}

/// Summed binary cross entropy; predictions are clamped to [1e-7, 1 - 1e-7].
double bce_loss(std::span<const double> preds, std::span<const double> targets);

inline double bce_term(double p, double target) {
  constexpr double kClamp = 1e-7;
  const double q = std::clamp(p, kClamp, 1.0 - kClamp);
  return -(target * std::log(q) + (1.0 - target) * std::log(1.0 - q));
}

}  // namespace intake::net
