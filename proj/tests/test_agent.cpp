#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gen.hpp"
#include "sicmab/agent.hpp"
#include "sicmab/error.hpp"

using namespace sicmab;

namespace {

std::vector<ParameterSet> arms(std::size_t n) {
  std::vector<ParameterSet> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({i, 920.7e6 + 0.2e6 * i, 125e3, 1});
  return out;
}

TransmissionCost cost() {
  TransmissionCost c;
  c.t_toa_s = 0.1;
  c.e_toa_j = 0.01;
  c.e_active_j = 0.02;
  return c;
}

AgentConfig config(bool sic, HistoryMode mode = HistoryMode::per_arm) {
  AgentConfig cfg;
  cfg.sic_enabled = sic;
  cfg.history_mode = mode;
  cfg.payload_bits = 400.0;
  cfg.reward_scale = 40000.0;  // 400 bit / 0.01 J
  return cfg;
}

// Outcome depends only on (step, arm): replays are exact.
using World = std::function<bool(std::uint32_t step, std::size_t arm)>;

World switching_world(std::uint64_t seed, std::uint32_t change_at) {
  return [seed, change_at](std::uint32_t step, std::size_t arm) {
    const double u = jam_draw(seed, arm, step);
    const double p = step < change_at ? (arm == 0 ? 0.95 : 0.5) : (arm == 0 ? 0.05 : 0.9);
    return u < p;
  };
}

void drive(Agent& agent, const World& world, std::uint32_t from, std::uint32_t to) {
  for (std::uint32_t step = from; step <= to; ++step) {
    const std::size_t a = agent.next_arm();
    const bool ok = world(step, a);
    agent.observe({ok, ok ? FailureCause::none : FailureCause::jammed}, cost());
  }
}

}  // namespace

TEST_CASE("initial sweep covers every arm once") {
  Agent agent(arms(6), config(true));
  CHECK(agent.mode() == AgentMode::initial_sweep);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(agent.next_arm() == i);
    CHECK(agent.next_arm() == i);  // stable until observed
    agent.observe({i % 2 == 0, FailureCause::none}, cost());
  }
  CHECK(agent.mode() == AgentMode::learning);
  CHECK(agent.bandit().total_steps() == 6);
}

TEST_CASE("agent contracts") {
  Agent agent(arms(2), config(true));
  CHECK_THROWS_AS(agent.observe({true, FailureCause::none}, cost()), ContractViolation);
  AgentConfig bad = config(true);
  bad.reward_scale = 0.0;
  CHECK_THROWS_AS(Agent(arms(2), bad), ConfigError);
}

TEST_CASE("property: records match rewards and bandit state") {
  for (int k = 0; k < 60; ++k) {
    const auto world = switching_world(100 + k, 150);
    Agent agent(arms(4), config(k % 2 == 0, k % 4 < 2 ? HistoryMode::per_arm : HistoryMode::global));
    drive(agent, world, 1, 300);

    const auto& recs = agent.records();
    REQUIRE(recs.size() == 300);
    std::size_t last_reset = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      CHECK(r.transmission_index == i + 1);
      CHECK(r.success == (r.raw_reward > 0.0));
      CHECK(r.normalized_reward == std::min(1.0, r.raw_reward / 40000.0));
      CHECK(r.e_active_j == 0.02);
      if (r.reset_triggered) last_reset = i + 1;
    }
    // bandit holds exactly the rewards observed since the last reset
    std::vector<double> sums(4, 0.0);
    std::vector<std::uint64_t> counts(4, 0);
    for (std::size_t i = last_reset; i < recs.size(); ++i) {
      sums[recs[i].arm] += recs[i].normalized_reward;
      ++counts[recs[i].arm];
    }
    for (std::size_t a = 0; a < 4; ++a) {
      CHECK(agent.bandit().stats(a).cumulative_reward == doctest::Approx(sums[a]).epsilon(1e-12));
      CHECK(agent.bandit().stats(a).selection_count == counts[a]);
    }
    CHECK(agent.bandit().total_steps() == recs.size() - last_reset);
  }
}

TEST_CASE("property: reset isolation") {
  int resets_seen = 0;
  for (int k = 0; k < 60; ++k) {
    const auto world = switching_world(200 + k, 120);
    const auto mode = k % 2 == 0 ? HistoryMode::per_arm : HistoryMode::global;
    Agent agent(arms(3), config(true, mode));
    drive(agent, world, 1, 400);

    const auto& recs = agent.records();
    const auto it = std::find_if(recs.begin(), recs.end(),
                                 [](const TransmissionRecord& r) { return r.reset_triggered; });
    if (it == recs.end()) continue;
    ++resets_seen;
    const auto r = static_cast<std::uint32_t>(it - recs.begin()) + 1;

    // after a reset the agent behaves exactly like a fresh one
    Agent fresh(arms(3), config(true, mode));
    drive(fresh, world, r + 1, 400);
    REQUIRE(fresh.records().size() == 400 - r);
    for (std::size_t i = 0; i < fresh.records().size(); ++i) {
      const auto& a = recs[r + i];
      const auto& b = fresh.records()[i];
      CHECK(a.arm == b.arm);
      CHECK(a.success == b.success);
      CHECK(a.reset_triggered == b.reset_triggered);
    }
  }
  CHECK(resets_seen > 30);
}

TEST_CASE("property: without detection the agent is a bare bandit") {
  for (int k = 0; k < 60; ++k) {
    auto rng = gen::rng_for(41, k);
    const std::size_t n_arms = static_cast<std::size_t>(gen::uniform_int(rng, 1, 8));
    const auto world = switching_world(300 + k, static_cast<std::uint32_t>(gen::uniform_int(rng, 1, 300)));
    Agent agent(arms(n_arms), config(false));
    Bandit bare(arms(n_arms));
    for (std::uint32_t step = 1; step <= 300; ++step) {
      const std::size_t a = agent.next_arm();
      const std::size_t b = bare.select();
      REQUIRE(a == b);
      const bool ok = world(step, a);
      agent.observe({ok, FailureCause::none}, cost());
      bare.update(b, ok ? 1.0 : 0.0);
    }
    CHECK(agent.bandit().total_steps() == bare.total_steps());
    for (std::size_t i = 0; i < n_arms; ++i) {
      CHECK(agent.bandit().stats(i).cumulative_reward == bare.stats(i).cumulative_reward);
    }
  }
}

TEST_CASE("detector reacts to a dead arm") {
  Agent agent(arms(3), config(true));
  // arm 0 is perfect, then dies at step 100
  const World world = [](std::uint32_t step, std::size_t arm) { return arm == 0 && step < 100; };
  drive(agent, world, 1, 130);
  const auto& recs = agent.records();
  const auto it = std::find_if(recs.begin() + 99, recs.end(),
                               [](const TransmissionRecord& r) { return r.reset_triggered; });
  REQUIRE(it != recs.end());
  CHECK(it->transmission_index <= 110);
}

TEST_CASE("episode validation") {
  const auto schedule = PhaseSchedule::always_clear(10);
  const std::vector<TransmissionCost> costs(3, cost());
  const std::vector<double> offsets{0.0};
  std::vector<Agent> agents(1, Agent(arms(3), config(true)));

  EpisodeEnv env{&schedule, offsets, 15.0, costs, 10, 1};
  run_episode(agents, env);
  CHECK(agents[0].records().size() == 10);

  std::vector<Agent> more(1, Agent(arms(3), config(true)));
  env.horizon = 2;  // shorter than one sweep
  CHECK_THROWS_AS(run_episode(more, env), ConfigError);
  env.horizon = 11;
  CHECK_THROWS_AS(run_episode(more, env), ConfigError);
  env.horizon = 10;
  const std::vector<double> two{0.0, 1.0};
  env.offsets_s = two;
  CHECK_THROWS_AS(run_episode(more, env), ConfigError);
}

TEST_CASE("episode: identical offsets collide") {
  const auto schedule = PhaseSchedule::always_clear(5);
  const std::vector<TransmissionCost> costs(1, cost());
  const std::vector<double> offsets{0.5, 0.5, 7.0};
  std::vector<Agent> agents(3, Agent(arms(1), config(false)));
  run_episode(agents, {&schedule, offsets, 15.0, costs, 5, 1});
  for (const auto& r : agents[0].records()) CHECK(r.failure_cause == FailureCause::collision);
  for (const auto& r : agents[1].records()) CHECK(r.failure_cause == FailureCause::collision);
  for (const auto& r : agents[2].records()) CHECK(r.success);

  // a later start hears the earlier one and backs off
  const std::vector<double> near{0.5, 0.55};
  std::vector<Agent> pair(2, Agent(arms(1), config(false)));
  run_episode(pair, {&schedule, near, 15.0, costs, 5, 1});
  for (const auto& r : pair[0].records()) CHECK(r.success);
  for (const auto& r : pair[1].records()) CHECK(r.failure_cause == FailureCause::carrier_busy);
}
