#pragma once

// UCB1-tuned learner over a fixed list of transmission parameter sets.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sicmab {

/// One bandit arm: a (channel, transmit power, bandwidth) combination.
struct ParameterSet {
  std::size_t channel_id = 0;
  double center_frequency_hz = 0.0;
  double bandwidth_hz = 0.0;
  int tx_power_dbm = 0;

  /// e.g. "920.7MHz/250kHz/-3dBm"
  std::string label() const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

/// Snapshot of one arm's learning state.
struct ArmStats {
  double cumulative_reward = 0.0;     // R
  std::uint64_t selection_count = 0;  // N
  double mean = 0.0;                  // streaming mean of rewards
  double m2 = 0.0;                    // sum of squared deviations from the mean
  double last_score = 0.0;            // P at the most recent selection

  /// Population variance m2 / N; zero for an unplayed arm.
  double variance() const { return selection_count == 0 ? 0.0 : m2 / selection_count; }

  friend bool operator==(const ArmStats&, const ArmStats&) = default;
};

enum class VarianceMode {
  population,  // V = empirical variance of the arm's rewards
  padded,      // V = variance + sqrt(2 ln t / N), the original UCB1-tuned bound
};

/// UCB1-tuned index R/N + sqrt(ln t / N * min(1/4, V)). Unplayed arms score
/// +infinity so they are always tried first.
double ucb1_tuned_score(const ArmStats& stats, std::uint64_t t,
                        VarianceMode mode = VarianceMode::population);

/// Per-device bandit state. Statistics are kept column-wise so scoring runs
/// through the vectorised kernels.
class Bandit {
 public:
  explicit Bandit(std::vector<ParameterSet> arms, VarianceMode mode = VarianceMode::population);

  /// Index of the arm with the highest score, lowest index on ties. Records
  /// every arm's score as its last_score.
  std::size_t select();

  /// Folds a reward in [0, 1] into `arm`'s statistics and advances t.
  void update(std::size_t arm, double normalized_reward);

  /// Zeroes every statistic and t; the arm list is untouched.
  void reset();

  std::size_t arm_count() const { return arms_.size(); }
  const std::vector<ParameterSet>& arms() const { return arms_; }
  const ParameterSet& arm(std::size_t i) const { return arms_.at(i); }
  ArmStats stats(std::size_t i) const;
  std::uint64_t total_steps() const { return total_steps_; }
  VarianceMode variance_mode() const { return mode_; }

  friend bool operator==(const Bandit&, const Bandit&) = default;

 private:
  std::vector<ParameterSet> arms_;
  VarianceMode mode_;
  std::vector<double> reward_sum_;
  std::vector<double> count_;
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::vector<double> score_;
  std::uint64_t total_steps_ = 0;
};

}  // namespace sicmab
