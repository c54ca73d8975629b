#include "sicmab/agent.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "sicmab/error.hpp"

namespace sicmab {

Agent::Agent(std::vector<ParameterSet> arms, AgentConfig config)
    : config_(config), bandit_(std::move(arms), config.variance_mode) {
  if (!(config_.reward_scale > 0.0)) throw ConfigError("reward_scale", "must be positive");
  if (config_.sic_enabled && !(config_.theta > 0.0)) throw ConfigError("theta", "must be positive");
  const std::size_t n_histories =
      config_.history_mode == HistoryMode::per_arm ? bandit_.arm_count() : 1;
  histories_.assign(n_histories, AckHistory(config_.window_length, config_.shift_step));
}

std::size_t Agent::next_arm() {
  if (!pending_arm_) {
    pending_arm_ = mode_ == AgentMode::initial_sweep ? sweep_cursor_ : bandit_.select();
  }
  return *pending_arm_;
}

const AckHistory& Agent::history(std::size_t arm) const {
  return config_.history_mode == HistoryMode::per_arm ? histories_.at(arm) : histories_.front();
}

AckHistory& Agent::history_for(std::size_t arm) {
  return config_.history_mode == HistoryMode::per_arm ? histories_.at(arm) : histories_.front();
}

void Agent::reset_learning() {
  bandit_.reset();
  for (auto& h : histories_) h.clear();
  mode_ = AgentMode::initial_sweep;
  sweep_cursor_ = 0;
}

const TransmissionRecord& Agent::observe(const AckOutcome& outcome, const TransmissionCost& cost) {
  if (!pending_arm_) throw ContractViolation("observe() without a preceding next_arm()");
  const std::size_t arm = *pending_arm_;
  pending_arm_.reset();

  TransmissionRecord rec;
  rec.transmission_index = static_cast<std::uint32_t>(records_.size() + 1);
  rec.arm = arm;
  rec.success = outcome.success;
  rec.failure_cause = outcome.failure_cause;
  rec.raw_reward = reward(outcome.success, config_.payload_bits, cost.e_toa_j);
  rec.normalized_reward = std::min(1.0, rec.raw_reward / config_.reward_scale);
  rec.e_active_j = cost.e_active_j;

  AckHistory& history = history_for(arm);
  history.push(outcome.success);
  bandit_.update(arm, rec.normalized_reward);

  if (mode_ == AgentMode::initial_sweep && ++sweep_cursor_ == bandit_.arm_count()) {
    mode_ = AgentMode::learning;
  }

  // evaluate only once at least two full windows (with F = W/2) exist
  if (config_.sic_enabled &&
      history.size() >= 2 * static_cast<std::size_t>(config_.window_length)) {
    const SicResult sic = detect(history, config_.theta);
    rec.sic_statistic = sic.statistic;
    if (sic.detected) {
      rec.reset_triggered = true;
      reset_learning();
    }
  }

  records_.push_back(rec);
  return records_.back();
}

double jam_draw(std::uint64_t seed, std::size_t device, std::uint32_t transmission_index) {
  // splitmix64 over a mixed key
  std::uint64_t z = seed ^ (static_cast<std::uint64_t>(device) * 0x9E3779B97F4A7C15ULL) ^
                    (static_cast<std::uint64_t>(transmission_index) << 32);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

namespace {

enum class EventKind : int { end_of_airtime = 0, start = 1 };

struct Event {
  double time_s;
  EventKind kind;
  std::size_t device;
  std::uint32_t index;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time_s, a.kind, a.device) > std::tie(b.time_s, b.kind, b.device);
  }
};

}  // namespace

void run_episode(std::span<Agent> agents, const EpisodeEnv& env) {
  if (env.schedule == nullptr) throw ConfigError("schedule", "episode needs a phase schedule");
  if (env.offsets_s.size() != agents.size()) {
    throw ConfigError("offsets", "need one start offset per device");
  }
  if (env.horizon > env.schedule->horizon()) {
    throw ConfigError("horizon", "exceeds the phase schedule");
  }
  for (const Agent& a : agents) {
    if (a.bandit().arm_count() != env.arm_costs.size()) {
      throw ConfigError("arms", "cost table does not match the arm set");
    }
    if (env.horizon < a.bandit().arm_count()) {
      throw ConfigError("horizon", "must allow one sweep over every arm");
    }
  }
  if (env.horizon == 0) return;

  std::priority_queue<Event, std::vector<Event>, Later> queue;
  for (std::size_t g = 0; g < agents.size(); ++g) {
    queue.push({start_time(env.offsets_s[g], 1, env.interval_s), EventKind::start, g, 1});
  }

  std::vector<TransmissionAttempt> in_flight;
  std::vector<TransmissionAttempt> recent;  // transmitted attempts that may still overlap
  std::vector<TransmissionAttempt> pending(agents.size());

  auto schedule_next = [&](std::size_t g, std::uint32_t n) {
    if (n < env.horizon) {
      queue.push({start_time(env.offsets_s[g], n + 1, env.interval_s), EventKind::start, g, n + 1});
    }
  };

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    Agent& agent = agents[ev.device];

    if (ev.kind == EventKind::start) {
      const std::size_t arm = agent.next_arm();
      const ParameterSet& params = agent.bandit().arm(arm);
      const TransmissionCost& cost = env.arm_costs[arm];
      const TransmissionAttempt attempt{ev.device, arm,           params.channel_id,
                                        ev.time_s,  cost.t_toa_s, ev.index};
      if (!carrier_sense(attempt, in_flight)) {
        agent.observe({false, FailureCause::carrier_busy}, cost);
        schedule_next(ev.device, ev.index);
        continue;
      }
      in_flight.push_back(attempt);
      recent.push_back(attempt);
      pending[ev.device] = attempt;
      queue.push({attempt.end_s(), EventKind::end_of_airtime, ev.device, ev.index});
      continue;
    }

    const TransmissionAttempt attempt = pending[ev.device];
    std::erase_if(in_flight, [&](const TransmissionAttempt& a) { return a.device_id == ev.device; });
    const double draw = jam_draw(env.jam_seed, ev.device, ev.index);
    const AckOutcome outcome = resolve_outcome(attempt, *env.schedule, recent, draw);
    agent.observe(outcome, env.arm_costs[attempt.arm_index]);
    schedule_next(ev.device, ev.index);

    // anything ending before the oldest live transmission started can no
    // longer overlap a current or future attempt
    double horizon_s = ev.time_s;
    for (const auto& a : in_flight) horizon_s = std::min(horizon_s, a.start_s);
    std::erase_if(recent, [&](const TransmissionAttempt& a) { return a.end_s() <= horizon_s; });
  }
}

}  // namespace sicmab
