#ifndef AERONAV_TESTS_TESTUTIL_HPP
#define AERONAV_TESTS_TESTUTIL_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace testutil {

// Relative error with an absolute floor so near-zero pairs compare cleanly.
inline double rel_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
  return std::abs(a - b) / scale;
}

// Central finite difference d(loss)/d(params[i]) at step h.
inline double central_diff(std::vector<double>& params, size_t i,
                           const std::function<double(const std::vector<double>&)>& loss,
                           double h = 1e-5) {
  const double saved = params[i];
  params[i] = saved + h;
  const double up = loss(params);
  params[i] = saved - h;
  const double down = loss(params);
  params[i] = saved;
  return (up - down) / (2.0 * h);
}

// Max relative error between an analytic gradient and central differences
// over the given parameter indices (all indices when empty).
inline double max_grad_rel_error(
    std::vector<double> params, const std::vector<double>& analytic,
    const std::function<double(const std::vector<double>&)>& loss,
    const std::vector<size_t>& indices = {}, double h = 1e-5) {
  double worst = 0.0;
  if (indices.empty()) {
    for (size_t i = 0; i < params.size(); ++i) {
      worst = std::max(worst, rel_error(analytic[i], central_diff(params, i, loss, h)));
    }
  } else {
    for (size_t i : indices) {
      worst = std::max(worst, rel_error(analytic[i], central_diff(params, i, loss, h)));
    }
  }
  return worst;
}

}  // namespace testutil

#endif  // AERONAV_TESTS_TESTUTIL_HPP
