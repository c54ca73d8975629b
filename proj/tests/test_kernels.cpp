#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gen.hpp"
#include "sicmab/kernels.hpp"

using namespace sicmab;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> xlogx_table(std::size_t n) {
  std::vector<double> t(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) t[i] = static_cast<double>(i) * std::log(static_cast<double>(i));
  return t;
}

}  // namespace

TEST_CASE("argmax_first") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(kernels::argmax_first(std::vector<double>{}) == 0);
  CHECK(kernels::argmax_first(std::vector<double>{1, 3, 3, 2}) == 1);
  CHECK(kernels::argmax_first(std::vector<double>{nan, 0.5, nan}) == 1);
  CHECK(kernels::argmax_first(std::vector<double>{0.1, inf, inf}) == 1);
}

TEST_CASE("scalar table is always present") {
  CHECK(kernels::supported(kernels::Isa::scalar));
  CHECK(kernels::table(kernels::Isa::scalar).isa == kernels::Isa::scalar);
  CHECK(kernels::supported(kernels::active().isa));
  if (!kernels::supported(kernels::Isa::avx2)) {
    CHECK_THROWS_AS(kernels::table(kernels::Isa::avx2), std::invalid_argument);
  }
}

TEST_CASE("property: ucb kernels agree bit for bit") {
  if (!kernels::supported(kernels::Isa::avx2)) return;
  const auto& ref = kernels::table(kernels::Isa::scalar);
  const auto& simd = kernels::table(kernels::Isa::avx2);
  for (int k = 0; k < gen::kCases; ++k) {
    auto rng = gen::rng_for(51, k);
    const std::size_t n = static_cast<std::size_t>(gen::uniform_int(rng, 1, 67));
    std::vector<double> r(n), c(n), m2(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = gen::uniform_int(rng, 0, 4) == 0 ? 0.0 : gen::uniform_int(rng, 1, 5000);
      const double mean = gen::uniform(rng);
      r[i] = mean * c[i];
      m2[i] = c[i] * gen::uniform(rng, 0.0, 0.4);
    }
    const double log_t = std::log(static_cast<double>(gen::uniform_int(rng, 1, 100000)));
    for (bool padded : {false, true}) {
      std::vector<double> a(n), b(n);
      ref.ucb_scores({r, c, m2}, log_t, padded, a);
      simd.ucb_scores({r, c, m2}, log_t, padded, b);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(same_bits(a[i], b[i]));
        if (c[i] == 0.0) CHECK(std::isinf(a[i]));
      }
    }
  }
}

TEST_CASE("property: segment kernels agree bit for bit") {
  if (!kernels::supported(kernels::Isa::avx2)) return;
  const auto& ref = kernels::table(kernels::Isa::scalar);
  const auto& simd = kernels::table(kernels::Isa::avx2);
  for (int k = 0; k < gen::kCases; ++k) {
    auto rng = gen::rng_for(52, k);
    const auto s = gen::window_stats(rng, 2, 90, 1, 30);
    std::vector<std::int32_t> prefix{0};
    for (auto x : s.successes) prefix.push_back(prefix.back() + x);
    const auto table = xlogx_table(static_cast<std::size_t>(s.total_attempts()));
    std::vector<double> a(s.window_count() - 1), b(s.window_count() - 1);
    ref.segment_loglik(prefix, s.window_length, table, a);
    simd.segment_loglik(prefix, s.window_length, table, b);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_bits(a[i], b[i]));
  }
}
