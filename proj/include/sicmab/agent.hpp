#pragma once

// One end device running UCB1-tuned with SIC-triggered resets, and the
// discrete-event loop that drives a population of them over a shared medium.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sicmab/bandit.hpp"
#include "sicmab/change_detect.hpp"
#include "sicmab/energy_model.hpp"
#include "sicmab/environment.hpp"

namespace sicmab {

enum class HistoryMode {
  global,   // one ACK sequence per device
  per_arm,  // one sequence per arm; detection runs on the played arm's
};

struct AgentConfig {
  bool sic_enabled = true;
  double theta = 20.0;
  std::int32_t window_length = 10;
  std::int32_t shift_step = 5;
  HistoryMode history_mode = HistoryMode::per_arm;
  VarianceMode variance_mode = VarianceMode::population;
  double payload_bits = 400.0;
  /// Largest achievable raw reward (bit/J) over the arm set; raw rewards are
  /// divided by it before reaching the bandit.
  double reward_scale = 1.0;
};

enum class AgentMode { initial_sweep, learning };

struct TransmissionRecord {
  std::uint32_t transmission_index = 0;
  std::size_t arm = 0;
  bool success = false;
  FailureCause failure_cause = FailureCause::none;
  double raw_reward = 0.0;
  double normalized_reward = 0.0;
  double e_active_j = 0.0;
  std::optional<double> sic_statistic;
  bool reset_triggered = false;
};

class Agent {
 public:
  Agent(std::vector<ParameterSet> arms, AgentConfig config);

  /// Arm for the next transmission: the sweep cursor while sweeping,
  /// otherwise the bandit's choice. Stable until observe() is called.
  std::size_t next_arm();

  /// Feeds back the outcome of the transmission announced by next_arm().
  const TransmissionRecord& observe(const AckOutcome& outcome, const TransmissionCost& cost);

  const Bandit& bandit() const { return bandit_; }
  const AgentConfig& config() const { return config_; }
  AgentMode mode() const { return mode_; }
  std::size_t sweep_cursor() const { return sweep_cursor_; }
  /// ACK sequence for `arm` (ignored in global mode).
  const AckHistory& history(std::size_t arm = 0) const;
  const std::vector<TransmissionRecord>& records() const { return records_; }

 private:
  AckHistory& history_for(std::size_t arm);
  void reset_learning();

  AgentConfig config_;
  Bandit bandit_;
  std::vector<AckHistory> histories_;
  AgentMode mode_ = AgentMode::initial_sweep;
  std::size_t sweep_cursor_ = 0;
  std::optional<std::size_t> pending_arm_;
  std::vector<TransmissionRecord> records_;
};

/// Shared environment of one replication.
struct EpisodeEnv {
  const PhaseSchedule* schedule = nullptr;
  std::span<const double> offsets_s;               // one per device
  double interval_s = 15.0;
  std::span<const TransmissionCost> arm_costs;     // indexed like the agents' arms
  std::uint32_t horizon = 0;
  std::uint64_t jam_seed = 0;
};

/// Runs every device for `env.horizon` transmissions. Attempts are processed
/// in time order; equal times resolve end-of-airtime before new starts, then
/// by device id. Records accumulate inside each agent.
void run_episode(std::span<Agent> agents, const EpisodeEnv& env);

/// Uniform [0, 1) draw that depends only on (seed, device, index).
double jam_draw(std::uint64_t seed, std::size_t device, std::uint32_t transmission_index);

}  // namespace sicmab
