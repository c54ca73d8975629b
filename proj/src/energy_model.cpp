#include "sicmab/energy_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sicmab/error.hpp"

namespace sicmab {

void RadioParams::validate() const {
  if (spreading_factor < 6 || spreading_factor > 12) {
    throw DomainError("spreading factor must be in [6, 12], got " +
                      std::to_string(spreading_factor));
  }
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  if (payload_bytes < 1) throw DomainError("payload must carry at least one byte");
  if (preamble_symbols < 1) throw DomainError("preamble needs at least one symbol");
  if (coding_rate < 1 || coding_rate > 4) throw DomainError("coding rate index must be in [1, 4]");
}

double EnergyProfile::radio_power_w(int tx_dbm) const {
  const auto it = tx_power_draw_w.find(tx_dbm);
  if (it == tx_power_draw_w.end()) {
    throw ConfigError("tx_power_draw_w", "no radio power draw for " + std::to_string(tx_dbm) + " dBm");
  }
  return it->second;
}

void EnergyProfile::validate() const {
  if (e_wakeup_j < 0.0) throw ConfigError("wakeup", "energy must be non-negative");
  if (e_processing_j < 0.0) throw ConfigError("processing", "energy must be non-negative");
  if (e_receive_j < 0.0) throw ConfigError("receive", "energy must be non-negative");
  if (p_mcu_w < 0.0) throw ConfigError("mcu_power_w", "power must be non-negative");
  for (const auto& [dbm, watts] : tx_power_draw_w) {
    if (!(watts >= 0.0)) {
      throw ConfigError("tx_power_draw_w", "negative draw at " + std::to_string(dbm) + " dBm");
    }
  }
}

double symbol_duration(int spreading_factor, double bandwidth_hz) {
  if (spreading_factor < 6 || spreading_factor > 12) {
    throw DomainError("spreading factor must be in [6, 12]");
  }
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be positive");
  return std::ldexp(1.0, spreading_factor) / bandwidth_hz;
}

double preamble_duration(int preamble_symbols, double t_symbol_s) {
  if (preamble_symbols < 1) throw DomainError("preamble needs at least one symbol");
  if (!(t_symbol_s > 0.0)) throw DomainError("symbol duration must be positive");
  return (4.25 + preamble_symbols) * t_symbol_s;
}

int payload_symbol_count(const RadioParams& params) {
  const int sf = params.spreading_factor;
  const int de = params.low_data_rate_optimize ? 1 : 0;
  const int crc = params.crc_enabled ? 1 : 0;
  const int ih = params.explicit_header ? 0 : 1;
  const int denom = 4 * (sf - 2 * de);
  if (denom <= 0) throw DomainError("SF - 2*DE must be positive");

  const int numer = 8 * params.payload_bytes - 4 * sf + 28 + 16 * crc - 20 * ih;
  // ceil for positive numerators; non-positive ones are clamped to zero below
  const int blocks = numer > 0 ? (numer + denom - 1) / denom : 0;
  return 8 + std::max(blocks * (params.coding_rate + 4), 0);
}

TransmissionCost transmission_cost(const RadioParams& params, const EnergyProfile& profile,
                                   int tx_dbm) {
  params.validate();
  const double p_radio = profile.radio_power_w(tx_dbm);

  TransmissionCost cost;
  cost.t_symbol_s = symbol_duration(params.spreading_factor, params.bandwidth_hz);
  cost.t_preamble_s = preamble_duration(params.preamble_symbols, cost.t_symbol_s);
  cost.t_payload_s = payload_symbol_count(params) * cost.t_symbol_s;
  cost.t_toa_s = cost.t_preamble_s + cost.t_payload_s;
  cost.e_toa_j = (profile.p_mcu_w + p_radio) * cost.t_toa_s;
  cost.e_active_j = profile.e_wakeup_j + profile.e_processing_j + cost.e_toa_j + profile.e_receive_j;
  return cost;
}

double energy_efficiency(double payload_bits, double success_rate, double e_active_j) {
  if (!(e_active_j > 0.0)) throw DomainError("active energy must be positive");
  if (!(success_rate >= 0.0 && success_rate <= 1.0)) {
    throw DomainError("success rate must lie in [0, 1]");
  }
  return payload_bits * success_rate / e_active_j;
}

double reward(bool success, double payload_bits, double e_toa_j) {
  if (!(e_toa_j > 0.0)) throw DomainError("airtime energy must be positive");
  return success ? payload_bits / e_toa_j : 0.0;
}

}  // namespace sicmab
