#pragma once

#include <cstddef>
#include <vector>

#include "intake/matrix.hpp"
#include "intake/net/params.hpp"

namespace intake::net {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  std::vector<double> analytic;
  std::vector<double> numeric;
};

/// Compares the backpropagated gradient of bce(forward_window(frame), target)
/// with central differences for every parameter, in double precision.
/// Relative error is |a - n| / max(|a|, |n|, floor).
GradCheckResult gradient_check(const BasicModelParams<double>& p, const Matrix<double>& frame, double target,
                               double step = 1e-4, double floor = 1e-6);

}  // namespace intake::net
