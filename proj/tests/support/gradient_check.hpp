#pragma once

#include <algorithm>
#include <cmath>

namespace kgvec::testing {

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Relative error with an absolute floor, so coordinates whose true gradient
/// is ~0 are judged by absolute error instead of blowing up the ratio.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Central difference of `loss` with respect to the scalar at `slot`.
template <typename Loss>
double central_difference(double& slot, Loss&& loss, double h = kFiniteDifferenceStep) {
  const double saved = slot;
  slot = saved + h;
  const double plus = loss();
  slot = saved - h;
  const double minus = loss();
  slot = saved;
  return (plus - minus) / (2 * h);
}

}  // namespace kgvec::testing
