#pragma once

// Experiment description and its YAML file format. Every field has a
// default; an empty file yields the reference 30-device, 1000-transmission
// setup. All values in the file are SI units (Hz, s, W).

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sicmab/agent.hpp"
#include "sicmab/bandit.hpp"
#include "sicmab/energy_model.hpp"
#include "sicmab/environment.hpp"

namespace sicmab {

enum class ArmMode {
  channel_bound_bw,  // each channel carries its own bandwidth: |K| = M x P
  cross_product,     // every channel with every bandwidth: |K| = M x P x L
};

enum class ArmOrder {
  power_major,    // index = power * M + channel
  channel_major,  // index = channel * P + power
};

/// Jammer phase keyed by center frequency, as written in the file.
struct PhaseSpec {
  std::uint32_t first = 1;
  std::uint32_t last = 1;
  std::vector<double> disabled_hz;

  friend bool operator==(const PhaseSpec&, const PhaseSpec&) = default;
};

struct Scenario {
  std::vector<Channel> channels = {
      {0, 920.7e6, 250e3}, {1, 921.1e6, 250e3}, {2, 921.4e6, 125e3},
      {3, 921.6e6, 125e3}, {4, 921.8e6, 125e3},
  };
  std::vector<int> tx_powers_dbm = {-3, 1, 5, 9, 13};
  std::vector<double> bandwidths_hz = {125e3, 250e3};  // cross_product only
  ArmMode arm_mode = ArmMode::channel_bound_bw;
  ArmOrder arm_order = ArmOrder::power_major;

  std::uint32_t num_devices = 30;
  double transmission_interval_s = 15.0;
  std::uint32_t horizon = 1000;

  RadioParams radio{};  // SF 7, 8 preamble symbols, 50 bytes, CR 4/5, CRC, explicit header

  // active-mode energy: each fixed phase is power x duration
  double mcu_power_w = 0.0297;
  double wakeup_power_w = 0.0561;
  double wakeup_time_s = 0.010;
  double processing_power_w = 0.0858;
  double processing_time_s = 0.010;
  double receive_power_w = 0.066;
  double receive_time_s = 0.100;
  // radio supply draw per TX level, roughly an SX127x at 3.3 V
  std::map<int, double> tx_power_draw_w = {
      {-3, 0.0495}, {1, 0.0561}, {5, 0.0660}, {9, 0.0792}, {13, 0.0957},
  };

  std::int32_t window_length = 10;
  std::int32_t shift_step = 5;
  double theta = 20.0;
  HistoryMode history_mode = HistoryMode::per_arm;
  VarianceMode variance_mode = VarianceMode::population;

  std::vector<PhaseSpec> phases = {
      {1, 200, {}},
      {201, 400, {920.7e6, 921.1e6}},
      {401, 600, {}},
      {601, 800, {921.4e6, 921.6e6}},
      {801, 1000, {}},
  };
  double jam_rate = 1.0;

  std::uint32_t replications = 10;
  std::uint64_t base_seed = 1;
  std::uint32_t metrics_window = 40;  // rolling window and selection-ratio bin width

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  std::vector<ParameterSet> arms() const;
  EnergyProfile energy_profile() const;
  PhaseSchedule schedule() const;
  double payload_bits() const { return 8.0 * radio.payload_bytes; }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses YAML text; omitted keys keep their defaults, unknown keys are
/// rejected. The result is validated.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Full YAML rendering; parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& scenario);

std::string_view to_string(ArmMode mode);
std::string_view to_string(ArmOrder order);
std::string_view to_string(HistoryMode mode);
std::string_view to_string(VarianceMode mode);

}  // namespace sicmab
