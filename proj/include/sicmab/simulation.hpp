#pragma once

// Seeded replications of a scenario and the metrics derived from them.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sicmab/agent.hpp"
#include "sicmab/scenario.hpp"

namespace sicmab {

enum class Method {
  proposed,  // UCB1-tuned with SIC resets
  baseline,  // UCB1-tuned alone
};

std::string_view to_string(Method method);

/// Per-transmission energy costs of every arm, in arm order.
std::vector<TransmissionCost> arm_costs(const Scenario& scenario);

/// payload_bits / min e_toa over the arm set.
double max_raw_reward(const Scenario& scenario);

/// Seed of replication `index` under `base_seed`. Both methods share it, so
/// they see identical offsets and jammer draws.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint32_t index);

/// Runs one replication and returns each device's full record log.
std::vector<std::vector<TransmissionRecord>> simulate_replication(const Scenario& scenario,
                                                                  Method method,
                                                                  std::uint64_t seed);

/// Aggregates of one replication, summed over devices.
struct ReplicationSummary {
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> successes;  // by transmission index - 1
  std::vector<double> e_active_j;        // by transmission index - 1
  /// selections[bin][arm], bins of metrics_window transmissions
  std::vector<std::vector<std::uint32_t>> selections;
  std::vector<double> device_success_rate;
  std::vector<double> device_energy_efficiency;
  std::vector<std::vector<std::uint32_t>> reset_indices;  // per device
  double overall_success_rate = 0.0;
  double overall_energy_efficiency = 0.0;

  /// Success fraction over transmissions [first, last], all devices.
  double interval_success_rate(std::uint32_t first, std::uint32_t last) const;
};

ReplicationSummary summarize(const Scenario& scenario, std::uint64_t seed,
                             std::span<const std::vector<TransmissionRecord>> device_records);

struct SelectionBin {
  std::uint32_t bin_start = 1;
  std::vector<double> ratio;  // per arm, sums to 1
};

struct MetricsReport {
  Method method = Method::proposed;
  std::vector<ParameterSet> arms;
  std::vector<std::string> arm_labels;
  std::vector<double> rolling_success_rate;  // by transmission index - 1
  std::vector<double> energy_efficiency;     // bit/J, same trailing window
  std::vector<SelectionBin> selection_bins;
  double overall_success_rate = 0.0;
  double overall_energy_efficiency = 0.0;
  /// Mean over (replication, device, degrading phase change) of the number
  /// of transmissions from the change up to and including the reset it
  /// triggered. Empty when no reset followed any change.
  std::optional<double> mean_detection_latency;
  std::vector<ReplicationSummary> replications;

  /// Share of selections in bin `bin` (0-based) that used one of `channel_ids`.
  double channel_share(std::size_t bin, std::span<const std::size_t> channel_ids) const;
  /// Same for a single replication.
  double channel_share(std::size_t replication, std::size_t bin,
                       std::span<const std::size_t> channel_ids) const;
};

/// Runs `scenario.replications` replications on a worker pool and averages
/// them. Results depend only on the scenario (including base_seed), not on
/// thread scheduling. `threads` = 0 uses the hardware concurrency.
MetricsReport run(const Scenario& scenario, Method method, unsigned threads = 0);

/// Writes success_rate.csv, selection_ratio.csv, energy_efficiency.csv and
/// summary.csv into `out_dir` (created if missing), one block per report.
void emit_csv(std::span<const MetricsReport> reports, const std::filesystem::path& out_dir);

}  // namespace sicmab
