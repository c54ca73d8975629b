#pragma once

// LoRa airtime and per-transmission energy accounting.
//
// All quantities are SI: seconds, hertz, watts, joules. Functions are pure
// and safe to call concurrently.

#include <map>

namespace sicmab {

/// Modem settings that determine time on air.
struct RadioParams {
  int spreading_factor = 7;
  double bandwidth_hz = 125'000.0;
  int preamble_symbols = 8;
  int payload_bytes = 50;
  int coding_rate = 1;  // 4/(4+CR), CR in 1..4
  bool crc_enabled = true;
  bool explicit_header = true;
  bool low_data_rate_optimize = false;

  /// Throws DomainError if any field is out of range.
  void validate() const;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

/// Device power/energy constants. Fixed-phase energies are already
/// integrated (power x duration); the radio draw depends on the TX level.
struct EnergyProfile {
  double e_wakeup_j = 0.0;
  double e_processing_j = 0.0;
  double e_receive_j = 0.0;
  double p_mcu_w = 0.0;
  std::map<int, double> tx_power_draw_w;  // dBm -> W

  /// Radio draw at `tx_dbm`. Throws ConfigError for an unknown level.
  double radio_power_w(int tx_dbm) const;
  void validate() const;

  friend bool operator==(const EnergyProfile&, const EnergyProfile&) = default;
};

struct TransmissionCost {
  double t_symbol_s = 0.0;
  double t_preamble_s = 0.0;
  double t_payload_s = 0.0;
  double t_toa_s = 0.0;
  double e_toa_j = 0.0;
  double e_active_j = 0.0;
};

/// 2^sf / bw.
double symbol_duration(int spreading_factor, double bandwidth_hz);

/// (4.25 + n_preamble) * t_symbol.
double preamble_duration(int preamble_symbols, double t_symbol_s);

/// Semtech SX127x payload symbol count:
///   8 + max(ceil((8PL - 4SF + 28 + 16CRC - 20IH) / (4(SF - 2DE))) (CR + 4), 0)
/// with IH = 1 for implicit header. Evaluated in integer arithmetic.
int payload_symbol_count(const RadioParams& params);

/// Airtime, radio energy (MCU + PA over the airtime) and the full active-mode
/// energy (wake-up + processing + airtime + receive window).
TransmissionCost transmission_cost(const RadioParams& params, const EnergyProfile& profile,
                                   int tx_dbm);

/// Delivered bits per joule: payload_bits * success_rate / e_active.
double energy_efficiency(double payload_bits, double success_rate, double e_active_j);

/// Raw bandit reward in bit/J: payload_bits / e_toa on success, 0 otherwise.
/// Normalisation to [0, 1] is done by the caller (see Agent).
double reward(bool success, double payload_bits, double e_toa_j);

}  // namespace sicmab
