#include "sicmab/environment.hpp"

#include <algorithm>
#include <string>

#include "sicmab/error.hpp"

namespace sicmab {

PhaseSchedule::PhaseSchedule(std::vector<Phase> phases, std::uint32_t horizon, double jam_rate)
    : phases_(std::move(phases)), horizon_(horizon), jam_rate_(jam_rate) {
  if (horizon_ < 1) throw ConfigError("horizon", "must be >= 1");
  if (!(jam_rate_ >= 0.0 && jam_rate_ <= 1.0)) throw ConfigError("jam_rate", "must lie in [0, 1]");
  if (phases_.empty()) throw ConfigError("phases", "schedule needs at least one phase");

  std::uint32_t expected = 1;
  for (auto& phase : phases_) {
    if (phase.first != expected || phase.last < phase.first) {
      throw ConfigError("phases", "phases must be contiguous and ordered, expected a phase starting at " +
                                      std::to_string(expected));
    }
    std::ranges::sort(phase.disabled);
    const auto dup = std::ranges::unique(phase.disabled);
    phase.disabled.erase(dup.begin(), dup.end());
    expected = phase.last + 1;
  }
  if (phases_.back().last != horizon_) {
    throw ConfigError("phases", "phases must cover [1, " + std::to_string(horizon_) + "]");
  }
}

PhaseSchedule PhaseSchedule::reference_jammer(std::uint32_t horizon) {
  if (horizon < 800) throw ConfigError("horizon", "default jammer schedule needs horizon >= 800");
  std::vector<Phase> phases{
      {1, 200, {}},
      {201, 400, {0, 1}},
      {401, 600, {}},
      {601, 800, {2, 3}},
  };
  if (horizon > 800) phases.push_back({801, horizon, {}});
  return PhaseSchedule(std::move(phases), horizon);
}

PhaseSchedule PhaseSchedule::always_clear(std::uint32_t horizon) {
  return PhaseSchedule({{1, horizon, {}}}, horizon);
}

const Phase& PhaseSchedule::phase_at(std::uint32_t transmission_index) const {
  if (transmission_index < 1 || transmission_index > horizon_) {
    throw DomainError("transmission index " + std::to_string(transmission_index) +
                      " outside schedule [1, " + std::to_string(horizon_) + "]");
  }
  const auto it = std::ranges::lower_bound(phases_, transmission_index, {}, &Phase::last);
  return *it;
}

bool channel_available(const PhaseSchedule& schedule, std::size_t channel_id,
                       std::uint32_t transmission_index) {
  const auto& disabled = schedule.phase_at(transmission_index).disabled;
  return !std::ranges::binary_search(disabled, channel_id);
}

std::string_view to_string(FailureCause cause) {
  switch (cause) {
    case FailureCause::none:
      return "none";
    case FailureCause::jammed:
      return "jammed";
    case FailureCause::collision:
      return "collision";
    case FailureCause::carrier_busy:
      return "carrier_busy";
  }
  return "unknown";
}

bool overlaps(const TransmissionAttempt& a, const TransmissionAttempt& b) {
  return a.channel_id == b.channel_id && a.start_s < b.end_s() && b.start_s < a.end_s();
}

namespace {

bool same_attempt(const TransmissionAttempt& a, const TransmissionAttempt& b) {
  return a.device_id == b.device_id && a.transmission_index == b.transmission_index;
}

}  // namespace

bool carrier_sense(const TransmissionAttempt& attempt,
                   std::span<const TransmissionAttempt> in_flight) {
  return std::ranges::none_of(in_flight, [&](const TransmissionAttempt& other) {
    return !same_attempt(attempt, other) && other.channel_id == attempt.channel_id &&
           other.start_s < attempt.start_s && attempt.start_s < other.end_s();
  });
}

AckOutcome resolve_outcome(const TransmissionAttempt& attempt, const PhaseSchedule& schedule,
                           std::span<const TransmissionAttempt> concurrent, double jam_draw) {
  if (!channel_available(schedule, attempt.channel_id, attempt.transmission_index) &&
      jam_draw < schedule.jam_rate()) {
    return {false, FailureCause::jammed};
  }
  const bool collided = std::ranges::any_of(concurrent, [&](const TransmissionAttempt& other) {
    return !same_attempt(attempt, other) && overlaps(attempt, other);
  });
  if (collided) return {false, FailureCause::collision};
  return {true, FailureCause::none};
}

std::vector<double> schedule_offsets(std::size_t num_devices, double interval_s,
                                     std::mt19937_64& rng) {
  if (num_devices < 1) throw ConfigError("num_devices", "must be >= 1");
  if (!(interval_s > 0.0)) throw ConfigError("transmission_interval_s", "must be positive");
  std::vector<double> offsets(num_devices);
  for (auto& offset : offsets) {
    // 53 random mantissa bits; the standard distributions are not portable
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    offset = unit * interval_s;
  }
  return offsets;
}

}  // namespace sicmab
