#pragma once

#include "sicmab/kernels.hpp"

namespace sicmab::kernels::detail {

void ucb_scores_scalar(const ArmColumns& arms, double log_t, bool padded_variance,
                       std::span<double> scores);
void segment_loglik_scalar(std::span<const std::int32_t> prefix, std::int32_t window_length,
                           std::span<const double> xlogx, std::span<double> out);

#if defined(SICMAB_HAVE_AVX2)
void ucb_scores_avx2(const ArmColumns& arms, double log_t, bool padded_variance,
                     std::span<double> scores);
void segment_loglik_avx2(std::span<const std::int32_t> prefix, std::int32_t window_length,
                         std::span<const double> xlogx, std::span<double> out);
#endif

}  // namespace sicmab::kernels::detail
