#include "intake/net/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "intake/net/network.hpp"

namespace intake::net {

GradCheckResult gradient_check(const BasicModelParams<double>& p, const Matrix<double>& frame, double target,
                               double step, double floor) {
  GradCheckResult r;
  r.analytic.assign(p.values.size(), 0.0);
  const auto tr = forward_trace(p, frame);
  backward_window(p, tr, tr.prob - target, std::span<double>(r.analytic));

  BasicModelParams<double> probe = p;
  auto loss_at = [&]() { return bce_term(forward_trace(probe, frame).prob, target); };
  r.numeric.resize(p.values.size());
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    const double orig = probe.values[k];
    probe.values[k] = orig + step;
    const double up = loss_at();
    probe.values[k] = orig - step;
    const double down = loss_at();
    probe.values[k] = orig;
    r.numeric[k] = (up - down) / (2.0 * step);

    const double a = r.analytic[k];
    const double n = r.numeric[k];
    const double rel = std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
    if (rel > r.max_rel_error) {
      r.max_rel_error = rel;
      r.worst_index = k;
    }
  }
  return r;
}

}  // namespace intake::net
