#include "sicmab/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "sicmab/error.hpp"

namespace sicmab {

std::string_view to_string(Method method) {
  return method == Method::baseline ? "baseline" : "proposed";
}

std::vector<TransmissionCost> arm_costs(const Scenario& scenario) {
  const EnergyProfile profile = scenario.energy_profile();
  std::vector<TransmissionCost> costs;
  for (const auto& arm : scenario.arms()) {
    RadioParams radio = scenario.radio;
    radio.bandwidth_hz = arm.bandwidth_hz;
    costs.push_back(transmission_cost(radio, profile, arm.tx_power_dbm));
  }
  return costs;
}

double max_raw_reward(const Scenario& scenario) {
  double best = 0.0;
  for (const auto& cost : arm_costs(scenario)) {
    best = std::max(best, reward(true, scenario.payload_bits(), cost.e_toa_j));
  }
  return best;
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint32_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                    index};
  std::uint32_t words[2];
  seq.generate(std::begin(words), std::end(words));
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<std::vector<TransmissionRecord>> simulate_replication(const Scenario& scenario,
                                                                  Method method,
                                                                  std::uint64_t seed) {
  const auto arms = scenario.arms();
  const auto costs = arm_costs(scenario);
  const PhaseSchedule schedule = scenario.schedule();

  std::mt19937_64 rng(seed);
  const auto offsets = schedule_offsets(scenario.num_devices, scenario.transmission_interval_s, rng);
  const std::uint64_t jam_seed = rng();

  AgentConfig cfg;
  cfg.sic_enabled = method == Method::proposed;
  cfg.theta = scenario.theta;
  cfg.window_length = scenario.window_length;
  cfg.shift_step = scenario.shift_step;
  cfg.history_mode = scenario.history_mode;
  cfg.variance_mode = scenario.variance_mode;
  cfg.payload_bits = scenario.payload_bits();
  cfg.reward_scale = max_raw_reward(scenario);

  std::vector<Agent> agents(scenario.num_devices, Agent(arms, cfg));
  const EpisodeEnv env{&schedule, offsets, scenario.transmission_interval_s, costs, scenario.horizon,
                       jam_seed};
  run_episode(agents, env);

  std::vector<std::vector<TransmissionRecord>> out;
  out.reserve(agents.size());
  for (auto& agent : agents) out.push_back(agent.records());
  return out;
}

double ReplicationSummary::interval_success_rate(std::uint32_t first, std::uint32_t last) const {
  if (first < 1 || last < first || last > successes.size()) {
    throw DomainError("interval outside the simulated horizon");
  }
  const auto sum = std::accumulate(successes.begin() + (first - 1), successes.begin() + last,
                                   std::uint64_t{0});
  const double attempts = static_cast<double>(last - first + 1) * device_success_rate.size();
  return static_cast<double>(sum) / attempts;
}

ReplicationSummary summarize(const Scenario& scenario, std::uint64_t seed,
                             std::span<const std::vector<TransmissionRecord>> device_records) {
  const std::uint32_t horizon = scenario.horizon;
  const std::uint32_t width = scenario.metrics_window;
  const std::size_t n_arms = scenario.arms().size();
  const std::size_t n_bins = (horizon + width - 1) / width;
  const double bits = scenario.payload_bits();

  ReplicationSummary s;
  s.seed = seed;
  s.successes.assign(horizon, 0);
  s.e_active_j.assign(horizon, 0.0);
  s.selections.assign(n_bins, std::vector<std::uint32_t>(n_arms, 0));

  std::uint64_t total_success = 0;
  for (const auto& records : device_records) {
    if (records.size() != horizon) throw ContractViolation("record log shorter than the horizon");
    std::uint64_t ok = 0;
    double energy = 0.0;
    std::vector<std::uint32_t> resets;
    for (const auto& r : records) {
      const std::size_t i = r.transmission_index - 1;
      s.successes[i] += r.success ? 1 : 0;
      s.e_active_j[i] += r.e_active_j;
      ++s.selections[i / width][r.arm];
      ok += r.success ? 1 : 0;
      energy += r.e_active_j;
      if (r.reset_triggered) resets.push_back(r.transmission_index);
    }
    const double rate = static_cast<double>(ok) / horizon;
    s.device_success_rate.push_back(rate);
    s.device_energy_efficiency.push_back(energy_efficiency(bits, rate, energy / horizon));
    s.reset_indices.push_back(std::move(resets));
    total_success += ok;
  }
  const double devices = static_cast<double>(device_records.size());
  s.overall_success_rate = static_cast<double>(total_success) / (devices * horizon);
  s.overall_energy_efficiency =
      std::accumulate(s.device_energy_efficiency.begin(), s.device_energy_efficiency.end(), 0.0) /
      devices;
  return s;
}

double MetricsReport::channel_share(std::size_t bin, std::span<const std::size_t> channel_ids) const {
  double share = 0.0;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (std::ranges::find(channel_ids, arms[a].channel_id) != channel_ids.end()) {
      share += selection_bins.at(bin).ratio[a];
    }
  }
  return share;
}

double MetricsReport::channel_share(std::size_t replication, std::size_t bin,
                                    std::span<const std::size_t> channel_ids) const {
  const auto& counts = replications.at(replication).selections.at(bin);
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  double hit = 0.0;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (std::ranges::find(channel_ids, arms[a].channel_id) != channel_ids.end()) hit += counts[a];
  }
  return total > 0.0 ? hit / total : 0.0;
}

namespace {

std::optional<double> detection_latency(const Scenario& scenario,
                                        std::span<const ReplicationSummary> reps) {
  const PhaseSchedule schedule = scenario.schedule();
  const auto& phases = schedule.phases();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t p = 1; p < phases.size(); ++p) {
    // only changes that switch a channel off are expected to trigger resets
    const bool degrades = std::ranges::any_of(phases[p].disabled, [&](std::size_t ch) {
      return !std::ranges::binary_search(phases[p - 1].disabled, ch);
    });
    if (!degrades) continue;
    for (const auto& rep : reps) {
      for (const auto& resets : rep.reset_indices) {
        const auto it = std::ranges::lower_bound(resets, phases[p].first);
        if (it != resets.end() && *it <= phases[p].last) {
          sum += static_cast<double>(*it - phases[p].first + 1);
          ++count;
        }
      }
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace

MetricsReport run(const Scenario& scenario, Method method, unsigned threads) {
  scenario.validate();
  const std::uint32_t n_reps = scenario.replications;
  std::vector<ReplicationSummary> reps(n_reps);
  std::vector<std::exception_ptr> errors(n_reps);

  std::atomic<std::uint32_t> next{0};
  auto worker = [&] {
    for (std::uint32_t r = next++; r < n_reps; r = next++) {
      try {
        const std::uint64_t seed = replication_seed(scenario.base_seed, r);
        const auto records = simulate_replication(scenario, method, seed);
        reps[r] = summarize(scenario, seed, records);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, n_reps);
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MetricsReport report;
  report.method = method;
  report.arms = scenario.arms();
  for (const auto& arm : report.arms) report.arm_labels.push_back(arm.label());

  const std::uint32_t horizon = scenario.horizon;
  const std::uint32_t width = scenario.metrics_window;
  const double per_index = static_cast<double>(n_reps) * scenario.num_devices;

  std::vector<double> succ(horizon + 1, 0.0);  // prefix sums over transmission index
  std::vector<double> energy(horizon + 1, 0.0);
  for (std::uint32_t i = 0; i < horizon; ++i) {
    double s = 0.0;
    double e = 0.0;
    for (const auto& rep : reps) {
      s += rep.successes[i];
      e += rep.e_active_j[i];
    }
    succ[i + 1] = succ[i] + s;
    energy[i + 1] = energy[i] + e;
  }
  for (std::uint32_t n = 1; n <= horizon; ++n) {
    const std::uint32_t lo = n > width ? n - width : 0;
    const double attempts = per_index * (n - lo);
    const double rate = (succ[n] - succ[lo]) / attempts;
    const double mean_energy = (energy[n] - energy[lo]) / attempts;
    report.rolling_success_rate.push_back(rate);
    report.energy_efficiency.push_back(energy_efficiency(scenario.payload_bits(), rate, mean_energy));
  }

  const std::size_t n_bins = reps.front().selections.size();
  for (std::size_t b = 0; b < n_bins; ++b) {
    SelectionBin bin;
    bin.bin_start = static_cast<std::uint32_t>(b * width + 1);
    bin.ratio.assign(report.arms.size(), 0.0);
    double total = 0.0;
    for (const auto& rep : reps) {
      for (std::size_t a = 0; a < report.arms.size(); ++a) {
        bin.ratio[a] += rep.selections[b][a];
        total += rep.selections[b][a];
      }
    }
    for (auto& r : bin.ratio) r /= total;
    report.selection_bins.push_back(std::move(bin));
  }

  for (const auto& rep : reps) {
    report.overall_success_rate += rep.overall_success_rate / n_reps;
    report.overall_energy_efficiency += rep.overall_energy_efficiency / n_reps;
  }
  report.mean_detection_latency = detection_latency(scenario, reps);
  report.replications = std::move(reps);
  return report;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path, std::string_view header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::filesystem::filesystem_error("cannot open for writing", path,
                                                   std::make_error_code(std::errc::io_error));
  out << header << '\n';
  return out;
}

}  // namespace

void emit_csv(std::span<const MetricsReport> reports, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  auto success = open_csv(out_dir / "success_rate.csv", "transmission_index,method,rolling_success_rate");
  auto selection = open_csv(out_dir / "selection_ratio.csv", "bin_start,method,arm_label,ratio");
  auto ee = open_csv(out_dir / "energy_efficiency.csv", "transmission_index,method,ee_bit_per_joule");
  auto summary = open_csv(out_dir / "summary.csv",
                          "method,overall_success_rate,overall_ee,mean_detection_latency");

  for (const auto& report : reports) {
    const std::string_view method = to_string(report.method);
    for (std::size_t i = 0; i < report.rolling_success_rate.size(); ++i) {
      success << i + 1 << ',' << method << ',' << num(report.rolling_success_rate[i]) << '\n';
      ee << i + 1 << ',' << method << ',' << num(report.energy_efficiency[i]) << '\n';
    }
    for (const auto& bin : report.selection_bins) {
      for (std::size_t a = 0; a < bin.ratio.size(); ++a) {
        selection << bin.bin_start << ',' << method << ',' << report.arm_labels[a] << ','
                  << num(bin.ratio[a]) << '\n';
      }
    }
    summary << method << ',' << num(report.overall_success_rate) << ','
            << num(report.overall_energy_efficiency) << ','
            << num(report.mean_detection_latency.value_or(std::numeric_limits<double>::quiet_NaN()))
            << '\n';
  }
  for (auto* f : {&success, &selection, &ee, &summary}) {
    f->flush();
    if (!*f) throw std::runtime_error("failed writing CSV output in " + out_dir.string());
  }
}

}  // namespace sicmab
