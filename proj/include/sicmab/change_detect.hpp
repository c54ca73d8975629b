#pragma once

// Change detection on a binary ACK sequence with the Schwarz information
// criterion (SIC).
//
// The sequence is cut into windows of W observations shifted by F. Under H0
// every window shares one success probability; under H1 the probability
// switches once, after window j. A change is declared when
//
//     SIC(H0) - min_j SIC(H1, j) > theta.
//
// Logarithms are natural; 0 ln 0 is taken as 0.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sicmab {

/// Per-window success counts of an ACK sequence.
struct WindowStats {
  std::vector<std::int32_t> successes;  // x_d, d = 1..D
  std::int32_t window_length = 0;       // W

  std::size_t window_count() const { return successes.size(); }
  std::int64_t total_successes() const;  // X
  std::int64_t total_attempts() const {  // Y = D W
    return static_cast<std::int64_t>(successes.size()) * window_length;
  }
};

/// Binary ACK sequence with its windowing parameters.
class AckHistory {
 public:
  AckHistory(std::int32_t window_length, std::int32_t shift_step);

  void push(bool ack) { bits_.push_back(ack ? 1 : 0); }
  void clear() { bits_.clear(); }

  std::size_t size() const { return bits_.size(); }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::int32_t window_length() const { return window_length_; }
  std::int32_t shift_step() const { return shift_step_; }
  std::int64_t popcount() const;

 private:
  std::vector<std::uint8_t> bits_;
  std::int32_t window_length_;
  std::int32_t shift_step_;
};

/// Splits `bits` into D = floor((l - W) / F) + 1 whole windows; window d
/// covers positions [(d-1)F, (d-1)F + W). Trailing samples that do not
/// complete a window are ignored. std::nullopt when l < W.
std::optional<WindowStats> windowize(std::span<const std::uint8_t> bits, std::int32_t window_length,
                                     std::int32_t shift_step);
std::optional<WindowStats> windowize(const AckHistory& history);

/// SIC under H0. Requires D >= 1.
double sic_h0(const WindowStats& stats);

/// SIC under H1 with the change after window `split`, 1 <= split <= D-1.
/// Throws DomainError otherwise.
double sic_h1(const WindowStats& stats, std::size_t split);

struct SicResult {
  double sic_h0 = 0.0;
  double sic_h1_min = 0.0;
  std::size_t best_split = 0;  // 0 when D < 2
  double statistic = 0.0;      // sic_h0 - sic_h1_min
  bool detected = false;
};

/// Full test. With fewer than two windows nothing is evaluated and the
/// result is all-zero with detected = false. Ties in the split scan resolve
/// to the lowest j.
SicResult detect(const WindowStats& stats, double theta);
SicResult detect(const AckHistory& history, double theta);

}  // namespace sicmab
