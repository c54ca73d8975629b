#include "sicmab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sicmab/error.hpp"
#include "sicmab/kernels.hpp"

namespace sicmab {

std::string ParameterSet::label() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1fMHz/%gkHz/%ddBm", center_frequency_hz / 1e6,
                bandwidth_hz / 1e3, tx_power_dbm);
  return buf;
}

double ucb1_tuned_score(const ArmStats& stats, std::uint64_t t, VarianceMode mode) {
  const double count = static_cast<double>(stats.selection_count);
  const double log_t = t > 0 ? std::log(static_cast<double>(t)) : 0.0;
  double score = 0.0;
  const kernels::ArmColumns cols{{&stats.cumulative_reward, 1}, {&count, 1}, {&stats.m2, 1}};
  kernels::table(kernels::Isa::scalar)
      .ucb_scores(cols, log_t, mode == VarianceMode::padded, {&score, 1});
  return score;
}

Bandit::Bandit(std::vector<ParameterSet> arms, VarianceMode mode)
    : arms_(std::move(arms)),
      mode_(mode),
      reward_sum_(arms_.size(), 0.0),
      count_(arms_.size(), 0.0),
      mean_(arms_.size(), 0.0),
      m2_(arms_.size(), 0.0),
      score_(arms_.size(), 0.0) {
  if (arms_.empty()) throw ConfigError("arms", "bandit needs at least one arm");
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    for (std::size_t k = i + 1; k < arms_.size(); ++k) {
      if (arms_[i] == arms_[k]) throw ConfigError("arms", "duplicate arm " + arms_[i].label());
    }
  }
}

std::size_t Bandit::select() {
  const double log_t = total_steps_ > 0 ? std::log(static_cast<double>(total_steps_)) : 0.0;
  const kernels::ArmColumns cols{reward_sum_, count_, m2_};
  kernels::active().ucb_scores(cols, log_t, mode_ == VarianceMode::padded, score_);
  return kernels::argmax_first(score_);
}

void Bandit::update(std::size_t arm, double normalized_reward) {
  if (arm >= arms_.size()) throw ContractViolation("arm index out of range");
  if (!(normalized_reward >= 0.0 && normalized_reward <= 1.0)) {
    throw ContractViolation("normalized reward must lie in [0, 1]");
  }
  // Welford
  count_[arm] += 1.0;
  reward_sum_[arm] += normalized_reward;
  const double delta = normalized_reward - mean_[arm];
  mean_[arm] += delta / count_[arm];
  m2_[arm] += delta * (normalized_reward - mean_[arm]);
  ++total_steps_;
}

void Bandit::reset() {
  std::ranges::fill(reward_sum_, 0.0);
  std::ranges::fill(count_, 0.0);
  std::ranges::fill(mean_, 0.0);
  std::ranges::fill(m2_, 0.0);
  std::ranges::fill(score_, 0.0);
  total_steps_ = 0;
}

ArmStats Bandit::stats(std::size_t i) const {
  if (i >= arms_.size()) throw std::out_of_range("arm index out of range");
  ArmStats s;
  s.cumulative_reward = reward_sum_[i];
  s.selection_count = static_cast<std::uint64_t>(count_[i]);
  s.mean = mean_[i];
  s.m2 = m2_[i];
  s.last_score = score_[i];
  return s;
}

}  // namespace sicmab
