// Scalar reference kernels. The SIMD variants must match these bit for bit.

#include <algorithm>
#include <cmath>
#include <limits>

#include "variants.hpp"

namespace sicmab::kernels::detail {

void ucb_scores_scalar(const ArmColumns& arms, double log_t, bool padded_variance,
                       std::span<double> scores) {
  const std::size_t n = scores.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double count = arms.count[i];
    if (count == 0.0) {
      scores[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double mean = arms.reward_sum[i] / count;
    double variance = arms.m2[i] / count;
    if (padded_variance) variance = variance + std::sqrt(2.0 * log_t / count);
    const double clamped = std::min(0.25, variance);
    scores[i] = mean + std::sqrt(log_t / count * clamped);
  }
}

void segment_loglik_scalar(std::span<const std::int32_t> prefix, std::int32_t window_length,
                           std::span<const double> xlogx, std::span<double> out) {
  const std::size_t splits = out.size();  // D - 1
  const std::int32_t total_x = prefix[splits + 1];
  const std::int32_t total_y = static_cast<std::int32_t>(splits + 1) * window_length;
  for (std::size_t j = 1; j <= splits; ++j) {
    const std::int32_t xj = prefix[j];
    const std::int32_t yj = static_cast<std::int32_t>(j) * window_length;
    const std::int32_t xr = total_x - xj;
    const std::int32_t yr = total_y - yj;
    const double head = (xlogx[xj] + xlogx[yj - xj]) - xlogx[yj];
    const double tail = (xlogx[xr] + xlogx[yr - xr]) - xlogx[yr];
    out[j - 1] = head + tail;
  }
}

}  // namespace sicmab::kernels::detail
