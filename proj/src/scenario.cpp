#include "sicmab/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sicmab/error.hpp"

namespace sicmab {

std::string_view to_string(ArmMode mode) {
  return mode == ArmMode::cross_product ? "cross_product" : "channel_bound_bw";
}
std::string_view to_string(ArmOrder order) {
  return order == ArmOrder::channel_major ? "channel_major" : "power_major";
}
std::string_view to_string(HistoryMode mode) {
  return mode == HistoryMode::per_arm ? "per_arm" : "global";
}
std::string_view to_string(VarianceMode mode) {
  return mode == VarianceMode::padded ? "padded" : "population";
}

namespace {

bool same_frequency(double a, double b) { return std::abs(a - b) < 0.5; }

std::size_t channel_index(const std::vector<Channel>& channels, double hz, const std::string& field) {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (same_frequency(channels[i].center_frequency_hz, hz)) return i;
  }
  std::ostringstream msg;
  msg.precision(12);
  msg << "no channel at " << hz << " Hz";
  throw ConfigError(field, msg.str());
}

}  // namespace

void Scenario::validate() const {
  if (channels.empty()) throw ConfigError("channels", "at least one channel required");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].id != i) throw ConfigError("channels", "channel ids must equal list position");
    if (!(channels[i].bandwidth_hz > 0.0)) throw ConfigError("channels", "bandwidth must be positive");
    for (std::size_t k = 0; k < i; ++k) {
      if (same_frequency(channels[i].center_frequency_hz, channels[k].center_frequency_hz)) {
        throw ConfigError("channels", "duplicate center frequency");
      }
    }
  }
  if (tx_powers_dbm.empty()) throw ConfigError("tx_powers_dbm", "at least one level required");
  if (std::set<int>(tx_powers_dbm.begin(), tx_powers_dbm.end()).size() != tx_powers_dbm.size()) {
    throw ConfigError("tx_powers_dbm", "duplicate level");
  }
  for (const int dbm : tx_powers_dbm) {
    if (!tx_power_draw_w.contains(dbm)) {
      throw ConfigError("energy.tx_power_draw_w", "missing entry for " + std::to_string(dbm) + " dBm");
    }
  }
  if (arm_mode == ArmMode::cross_product) {
    if (bandwidths_hz.empty()) throw ConfigError("bandwidths_hz", "at least one bandwidth required");
    for (const double bw : bandwidths_hz) {
      if (!(bw > 0.0)) throw ConfigError("bandwidths_hz", "bandwidth must be positive");
    }
  }
  if (num_devices < 1) throw ConfigError("num_devices", "must be >= 1");
  if (!(transmission_interval_s > 0.0)) throw ConfigError("transmission_interval_s", "must be positive");
  try {
    radio.validate();
  } catch (const DomainError& e) {
    throw ConfigError("radio", e.what());
  }
  for (const auto& [field, value] :
       {std::pair{"energy.mcu_power_w", mcu_power_w}, {"energy.wakeup_power_w", wakeup_power_w},
        {"energy.wakeup_time_s", wakeup_time_s}, {"energy.processing_power_w", processing_power_w},
        {"energy.processing_time_s", processing_time_s}, {"energy.receive_power_w", receive_power_w},
        {"energy.receive_time_s", receive_time_s}}) {
    if (!(value >= 0.0)) throw ConfigError(field, "must be non-negative");
  }
  try {
    energy_profile().validate();
  } catch (const ConfigError& e) {
    throw ConfigError("energy." + e.field(), e.what());
  }
  if (window_length < 1) throw ConfigError("detector.window_length", "must be >= 1");
  if (shift_step < 1 || shift_step > window_length) {
    throw ConfigError("detector.shift_step", "must satisfy 1 <= F <= W");
  }
  if (!(theta > 0.0)) throw ConfigError("detector.theta", "must be positive");
  if (horizon < arms().size()) {
    throw ConfigError("horizon", "must be >= number of arms (" + std::to_string(arms().size()) + ")");
  }
  if (!(jam_rate >= 0.0 && jam_rate <= 1.0)) throw ConfigError("jammer.jam_rate", "must lie in [0, 1]");
  try {
    (void)schedule();
  } catch (const ConfigError& e) {
    throw ConfigError("jammer." + e.field(), e.what());
  }
  if (replications < 1) throw ConfigError("replications", "must be >= 1");
  if (metrics_window < 1) throw ConfigError("metrics.window", "must be >= 1");
}

std::vector<ParameterSet> Scenario::arms() const {
  struct Slot {
    const Channel* channel;
    double bandwidth_hz;
  };
  std::vector<Slot> slots;
  for (const auto& ch : channels) {
    if (arm_mode == ArmMode::cross_product) {
      for (const double bw : bandwidths_hz) slots.push_back({&ch, bw});
    } else {
      slots.push_back({&ch, ch.bandwidth_hz});
    }
  }

  std::vector<ParameterSet> out;
  out.reserve(slots.size() * tx_powers_dbm.size());
  auto make = [](const Slot& s, int dbm) {
    return ParameterSet{s.channel->id, s.channel->center_frequency_hz, s.bandwidth_hz, dbm};
  };
  if (arm_order == ArmOrder::power_major) {
    for (const int dbm : tx_powers_dbm) {
      for (const auto& s : slots) out.push_back(make(s, dbm));
    }
  } else {
    for (const auto& s : slots) {
      for (const int dbm : tx_powers_dbm) out.push_back(make(s, dbm));
    }
  }
  return out;
}

EnergyProfile Scenario::energy_profile() const {
  EnergyProfile p;
  p.e_wakeup_j = wakeup_power_w * wakeup_time_s;
  p.e_processing_j = processing_power_w * processing_time_s;
  p.e_receive_j = receive_power_w * receive_time_s;
  p.p_mcu_w = mcu_power_w;
  p.tx_power_draw_w = tx_power_draw_w;
  return p;
}

PhaseSchedule Scenario::schedule() const {
  std::vector<Phase> out;
  out.reserve(phases.size());
  for (const auto& spec : phases) {
    Phase ph{spec.first, spec.last, {}};
    for (const double hz : spec.disabled_hz) ph.disabled.push_back(channel_index(channels, hz, "phases"));
    out.push_back(std::move(ph));
  }
  return PhaseSchedule(std::move(out), horizon, jam_rate);
}

// ---------------------------------------------------------------------------
// YAML

namespace {

void reject_unknown(const YAML::Node& node, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  if (!node.IsMap()) throw ConfigError(where.empty() ? "<root>" : where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::ranges::find(known, key) == known.end()) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, const std::string& where, T& out) {
  const YAML::Node node = parent[key];
  if (!node) return;
  const std::string field = where.empty() ? key : where + "." + key;
  try {
    out = node.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(field, "cannot parse value (" + e.msg + ")");
  }
}

template <typename E>
void read_enum(const YAML::Node& parent, const char* key, const std::string& where, E& out,
               std::initializer_list<E> options) {
  std::string text;
  read(parent, key, where, text);
  if (text.empty()) return;
  for (const E option : options) {
    if (to_string(option) == text) {
      out = option;
      return;
    }
  }
  throw ConfigError(where.empty() ? key : where + "." + key, "unrecognised value '" + text + "'");
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<parse>", e.what());
  }

  Scenario s;
  if (root.IsNull()) {
    s.validate();
    return s;
  }
  reject_unknown(root, "",
                 {"channels", "tx_powers_dbm", "bandwidths_hz", "arm_mode", "arm_order", "num_devices",
                  "transmission_interval_s", "horizon", "radio", "energy", "detector", "learner",
                  "jammer", "replications", "base_seed", "metrics"});

  if (const auto channels = root["channels"]) {
    if (!channels.IsSequence()) throw ConfigError("channels", "expected a list");
    s.channels.clear();
    for (std::size_t i = 0; i < channels.size(); ++i) {
      const std::string where = "channels[" + std::to_string(i) + "]";
      reject_unknown(channels[i], where, {"center_frequency_hz", "bandwidth_hz"});
      Channel ch{i, 0.0, 0.0};
      read(channels[i], "center_frequency_hz", where, ch.center_frequency_hz);
      read(channels[i], "bandwidth_hz", where, ch.bandwidth_hz);
      s.channels.push_back(ch);
    }
  }
  read(root, "tx_powers_dbm", "", s.tx_powers_dbm);
  read(root, "bandwidths_hz", "", s.bandwidths_hz);
  read_enum(root, "arm_mode", "", s.arm_mode, {ArmMode::channel_bound_bw, ArmMode::cross_product});
  read_enum(root, "arm_order", "", s.arm_order, {ArmOrder::power_major, ArmOrder::channel_major});
  read(root, "num_devices", "", s.num_devices);
  read(root, "transmission_interval_s", "", s.transmission_interval_s);
  read(root, "horizon", "", s.horizon);
  read(root, "replications", "", s.replications);
  read(root, "base_seed", "", s.base_seed);

  if (const auto radio = root["radio"]) {
    reject_unknown(radio, "radio",
                   {"spreading_factor", "preamble_symbols", "payload_bytes", "coding_rate",
                    "crc_enabled", "explicit_header", "low_data_rate_optimize"});
    read(radio, "spreading_factor", "radio", s.radio.spreading_factor);
    read(radio, "preamble_symbols", "radio", s.radio.preamble_symbols);
    read(radio, "payload_bytes", "radio", s.radio.payload_bytes);
    read(radio, "coding_rate", "radio", s.radio.coding_rate);
    read(radio, "crc_enabled", "radio", s.radio.crc_enabled);
    read(radio, "explicit_header", "radio", s.radio.explicit_header);
    read(radio, "low_data_rate_optimize", "radio", s.radio.low_data_rate_optimize);
  }
  if (const auto energy = root["energy"]) {
    reject_unknown(energy, "energy",
                   {"mcu_power_w", "wakeup_power_w", "wakeup_time_s", "processing_power_w",
                    "processing_time_s", "receive_power_w", "receive_time_s", "tx_power_draw_w"});
    read(energy, "mcu_power_w", "energy", s.mcu_power_w);
    read(energy, "wakeup_power_w", "energy", s.wakeup_power_w);
    read(energy, "wakeup_time_s", "energy", s.wakeup_time_s);
    read(energy, "processing_power_w", "energy", s.processing_power_w);
    read(energy, "processing_time_s", "energy", s.processing_time_s);
    read(energy, "receive_power_w", "energy", s.receive_power_w);
    read(energy, "receive_time_s", "energy", s.receive_time_s);
    read(energy, "tx_power_draw_w", "energy", s.tx_power_draw_w);
  }
  if (const auto det = root["detector"]) {
    reject_unknown(det, "detector", {"window_length", "shift_step", "theta", "history"});
    read(det, "window_length", "detector", s.window_length);
    read(det, "shift_step", "detector", s.shift_step);
    read(det, "theta", "detector", s.theta);
    read_enum(det, "history", "detector", s.history_mode, {HistoryMode::global, HistoryMode::per_arm});
  }
  if (const auto learner = root["learner"]) {
    reject_unknown(learner, "learner", {"variance"});
    read_enum(learner, "variance", "learner", s.variance_mode,
              {VarianceMode::population, VarianceMode::padded});
  }
  if (const auto jammer = root["jammer"]) {
    reject_unknown(jammer, "jammer", {"jam_rate", "phases"});
    read(jammer, "jam_rate", "jammer", s.jam_rate);
    if (const auto phases = jammer["phases"]) {
      if (!phases.IsSequence()) throw ConfigError("jammer.phases", "expected a list");
      s.phases.clear();
      for (std::size_t i = 0; i < phases.size(); ++i) {
        const std::string where = "jammer.phases[" + std::to_string(i) + "]";
        reject_unknown(phases[i], where, {"first", "last", "disabled_hz"});
        PhaseSpec ph;
        read(phases[i], "first", where, ph.first);
        read(phases[i], "last", where, ph.last);
        read(phases[i], "disabled_hz", where, ph.disabled_hz);
        s.phases.push_back(std::move(ph));
      }
    }
  }
  if (const auto metrics = root["metrics"]) {
    reject_unknown(metrics, "metrics", {"window"});
    read(metrics, "window", "metrics", s.metrics_window);
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "channels" << YAML::Value << YAML::BeginSeq;
  for (const auto& ch : s.channels) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "center_frequency_hz" << YAML::Value
        << ch.center_frequency_hz << YAML::Key << "bandwidth_hz" << YAML::Value << ch.bandwidth_hz
        << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "tx_powers_dbm" << YAML::Value << YAML::Flow << s.tx_powers_dbm;
  out << YAML::Key << "bandwidths_hz" << YAML::Value << YAML::Flow << s.bandwidths_hz;
  out << YAML::Key << "arm_mode" << YAML::Value << std::string(to_string(s.arm_mode));
  out << YAML::Key << "arm_order" << YAML::Value << std::string(to_string(s.arm_order));
  out << YAML::Key << "num_devices" << YAML::Value << s.num_devices;
  out << YAML::Key << "transmission_interval_s" << YAML::Value << s.transmission_interval_s;
  out << YAML::Key << "horizon" << YAML::Value << s.horizon;
  out << YAML::Key << "replications" << YAML::Value << s.replications;
  out << YAML::Key << "base_seed" << YAML::Value << s.base_seed;

  out << YAML::Key << "radio" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "spreading_factor" << YAML::Value << s.radio.spreading_factor;
  out << YAML::Key << "preamble_symbols" << YAML::Value << s.radio.preamble_symbols;
  out << YAML::Key << "payload_bytes" << YAML::Value << s.radio.payload_bytes;
  out << YAML::Key << "coding_rate" << YAML::Value << s.radio.coding_rate;
  out << YAML::Key << "crc_enabled" << YAML::Value << s.radio.crc_enabled;
  out << YAML::Key << "explicit_header" << YAML::Value << s.radio.explicit_header;
  out << YAML::Key << "low_data_rate_optimize" << YAML::Value << s.radio.low_data_rate_optimize;
  out << YAML::EndMap;

  out << YAML::Key << "energy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mcu_power_w" << YAML::Value << s.mcu_power_w;
  out << YAML::Key << "wakeup_power_w" << YAML::Value << s.wakeup_power_w;
  out << YAML::Key << "wakeup_time_s" << YAML::Value << s.wakeup_time_s;
  out << YAML::Key << "processing_power_w" << YAML::Value << s.processing_power_w;
  out << YAML::Key << "processing_time_s" << YAML::Value << s.processing_time_s;
  out << YAML::Key << "receive_power_w" << YAML::Value << s.receive_power_w;
  out << YAML::Key << "receive_time_s" << YAML::Value << s.receive_time_s;
  out << YAML::Key << "tx_power_draw_w" << YAML::Value << YAML::Flow << s.tx_power_draw_w;
  out << YAML::EndMap;

  out << YAML::Key << "detector" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "window_length" << YAML::Value << s.window_length;
  out << YAML::Key << "shift_step" << YAML::Value << s.shift_step;
  out << YAML::Key << "theta" << YAML::Value << s.theta;
  out << YAML::Key << "history" << YAML::Value << std::string(to_string(s.history_mode));
  out << YAML::EndMap;

  out << YAML::Key << "learner" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "variance" << YAML::Value << std::string(to_string(s.variance_mode));
  out << YAML::EndMap;

  out << YAML::Key << "jammer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "jam_rate" << YAML::Value << s.jam_rate;
  out << YAML::Key << "phases" << YAML::Value << YAML::BeginSeq;
  for (const auto& ph : s.phases) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "first" << YAML::Value << ph.first
        << YAML::Key << "last" << YAML::Value << ph.last << YAML::Key << "disabled_hz"
        << YAML::Value << YAML::Flow << ph.disabled_hz << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "metrics" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "window" << YAML::Value << s.metrics_window;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace sicmab
