#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "variants.hpp"

namespace sicmab::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &detail::ucb_scores_scalar,
                              &detail::segment_loglik_scalar};

#if defined(SICMAB_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &detail::ucb_scores_avx2, &detail::segment_loglik_avx2};
#endif

bool cpu_has_avx2() {
#if defined(SICMAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& resolve() {
  if (const char* forced = std::getenv("SICMAB_ISA"); forced != nullptr && *forced != '\0') {
    const std::string want(forced);
    if (want == "scalar") return kScalar;
    if (want == "avx2" && supported(Isa::avx2)) return table(Isa::avx2);
    // unknown or unsupported request: fall through to auto-detection
  }
  if (supported(Isa::avx2)) return table(Isa::avx2);
  return kScalar;
}

}  // namespace

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (isa == Isa::scalar) return kScalar;
#if defined(SICMAB_HAVE_AVX2)
  if (isa == Isa::avx2 && cpu_has_avx2()) return kAvx2;
#endif
  throw std::invalid_argument("kernel variant not available: " + std::string(name(isa)));
}

const KernelTable& active() {
  static const KernelTable& chosen = resolve();
  return chosen;
}

std::size_t argmax_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best] || (std::isnan(values[best]) && !std::isnan(values[i]))) {
      best = i;
    }
  }
  return best;
}

}  // namespace sicmab::kernels
