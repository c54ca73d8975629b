#pragma once

// Data-parallel inner loops with a scalar reference and ISA-specific variants.
//
// The active variant is picked once at first use from the CPU's feature set;
// the SICMAB_ISA environment variable ("scalar", "avx2") overrides the choice.
// All variants evaluate the same expression tree per element, so results are
// bit-identical to the scalar reference (the library builds with
// -ffp-contract=off).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sicmab::kernels {

enum class Isa { scalar, avx2 };

/// Inputs for ucb_scores, structure-of-arrays over arms.
struct ArmColumns {
  std::span<const double> reward_sum;  // R
  std::span<const double> count;       // N, stored as double
  std::span<const double> m2;          // sum of squared deviations
};

/// score[i] = R/N + sqrt(log_t/N * min(1/4, V)), V = m2/N (+ sqrt(2 log_t / N)
/// when `padded_variance`); +inf where N == 0.
using UcbScoresFn = void (*)(const ArmColumns& arms, double log_t, bool padded_variance,
                             std::span<double> scores);

/// Two-segment binomial log-likelihood for every split j = 1..D-1:
///   out[j-1] = f(Xj) + f(Yj-Xj) - f(Yj) + f(X'j) + f(Y'j-X'j) - f(Y'j)
/// where f(n) = n ln n is read from `xlogx`, `prefix` holds D+1 cumulative
/// window success counts (prefix[0] = 0) and Yj = j * window_length.
using SegmentLoglikFn = void (*)(std::span<const std::int32_t> prefix,
                                 std::int32_t window_length, std::span<const double> xlogx,
                                 std::span<double> out);

struct KernelTable {
  Isa isa;
  UcbScoresFn ucb_scores;
  SegmentLoglikFn segment_loglik;
};

std::string_view name(Isa isa);

/// True if this binary carries the variant and the CPU can run it.
bool supported(Isa isa);

/// Kernel table for `isa`. Throws std::invalid_argument when unsupported.
const KernelTable& table(Isa isa);

/// Best supported table, resolved once.
const KernelTable& active();

/// Index of the first maximum; 0 for an empty span. NaN never wins.
std::size_t argmax_first(std::span<const double> values);

}  // namespace sicmab::kernels
