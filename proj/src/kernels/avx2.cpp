// AVX2 variants. Compiled with -mavx2 only; reached through the dispatcher
// after a CPUID check, never called directly.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "variants.hpp"

namespace sicmab::kernels::detail {

void ucb_scores_avx2(const ArmColumns& arms, double log_t, bool padded_variance,
                     std::span<double> scores) {
  const std::size_t n = scores.size();
  const std::size_t body = n / 4 * 4;

  const __m256d zero = _mm256_setzero_pd();
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d vlog_t = _mm256_set1_pd(log_t);
  const __m256d two_log_t = _mm256_set1_pd(2.0 * log_t);

  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d count = _mm256_loadu_pd(arms.count.data() + i);
    const __m256d rsum = _mm256_loadu_pd(arms.reward_sum.data() + i);
    const __m256d m2 = _mm256_loadu_pd(arms.m2.data() + i);

    const __m256d mean = _mm256_div_pd(rsum, count);
    __m256d variance = _mm256_div_pd(m2, count);
    if (padded_variance) {
      variance = _mm256_add_pd(variance, _mm256_sqrt_pd(_mm256_div_pd(two_log_t, count)));
    }
    // min_pd(a, b) == (a < b ? a : b), same as std::min(0.25, v)
    const __m256d clamped = _mm256_min_pd(variance, quarter);
    const __m256d bonus = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_div_pd(vlog_t, count), clamped));
    const __m256d score = _mm256_add_pd(mean, bonus);

    const __m256d unplayed = _mm256_cmp_pd(count, zero, _CMP_EQ_OQ);
    _mm256_storeu_pd(scores.data() + i, _mm256_blendv_pd(score, inf, unplayed));
  }

  if (body < n) {
    const ArmColumns tail{arms.reward_sum.subspan(body), arms.count.subspan(body),
                          arms.m2.subspan(body)};
    ucb_scores_scalar(tail, log_t, padded_variance, scores.subspan(body));
  }
}

void segment_loglik_avx2(std::span<const std::int32_t> prefix, std::int32_t window_length,
                         std::span<const double> xlogx, std::span<double> out) {
  const std::size_t splits = out.size();
  const std::int32_t total_x = prefix[splits + 1];
  const std::int32_t total_y = static_cast<std::int32_t>(splits + 1) * window_length;
  const double* f = xlogx.data();

  const __m128i lane = _mm_setr_epi32(0, 1, 2, 3);
  const __m128i vw = _mm_set1_epi32(window_length);
  const __m128i vtotal_x = _mm_set1_epi32(total_x);
  const __m128i vtotal_y = _mm_set1_epi32(total_y);

  std::size_t j = 1;
  for (; j + 3 <= splits; j += 4) {
    const __m128i xj =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(prefix.data() + j));
    const __m128i jv = _mm_add_epi32(_mm_set1_epi32(static_cast<std::int32_t>(j)), lane);
    const __m128i yj = _mm_mullo_epi32(jv, vw);
    const __m128i xr = _mm_sub_epi32(vtotal_x, xj);
    const __m128i yr = _mm_sub_epi32(vtotal_y, yj);

    const __m256d f_xj = _mm256_i32gather_pd(f, xj, 8);
    const __m256d f_fj = _mm256_i32gather_pd(f, _mm_sub_epi32(yj, xj), 8);
    const __m256d f_yj = _mm256_i32gather_pd(f, yj, 8);
    const __m256d f_xr = _mm256_i32gather_pd(f, xr, 8);
    const __m256d f_fr = _mm256_i32gather_pd(f, _mm_sub_epi32(yr, xr), 8);
    const __m256d f_yr = _mm256_i32gather_pd(f, yr, 8);

    const __m256d head = _mm256_sub_pd(_mm256_add_pd(f_xj, f_fj), f_yj);
    const __m256d tail = _mm256_sub_pd(_mm256_add_pd(f_xr, f_fr), f_yr);
    _mm256_storeu_pd(out.data() + (j - 1), _mm256_add_pd(head, tail));
  }

  for (; j <= splits; ++j) {
    const std::int32_t xj = prefix[j];
    const std::int32_t yj = static_cast<std::int32_t>(j) * window_length;
    const std::int32_t xr = total_x - xj;
    const std::int32_t yr = total_y - yj;
    const double head = (f[xj] + f[yj - xj]) - f[yj];
    const double tail = (f[xr] + f[yr - xr]) - f[yr];
    out[j - 1] = head + tail;
  }
}

}  // namespace sicmab::kernels::detail
