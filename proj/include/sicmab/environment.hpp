#pragma once

// Shared-medium model: channel plan, jammer phase schedule, carrier sensing
// and destructive collisions. Channels are disjoint; two attempts interfere
// only on the same channel id.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace sicmab {

struct Channel {
  std::size_t id = 0;
  double center_frequency_hz = 0.0;
  double bandwidth_hz = 0.0;

  friend bool operator==(const Channel&, const Channel&) = default;
};

/// Interval [first, last] of per-device transmission indices (1-based) and
/// the channels jammed during it.
struct Phase {
  std::uint32_t first = 1;
  std::uint32_t last = 1;
  std::vector<std::size_t> disabled;

  friend bool operator==(const Phase&, const Phase&) = default;
};

class PhaseSchedule {
 public:
  /// Phases must be contiguous, ordered, and cover [1, horizon]. A jammed
  /// channel fails a transmission with probability `jam_rate`.
  PhaseSchedule(std::vector<Phase> phases, std::uint32_t horizon, double jam_rate = 1.0);

  /// Three-phase jammer: 250 kHz channels (ids 0, 1) off during 201-400,
  /// 921.4/921.6 MHz (ids 2, 3) off during 601-800. Requires horizon >= 800.
  static PhaseSchedule reference_jammer(std::uint32_t horizon = 1000);

  /// Single phase with every channel enabled.
  static PhaseSchedule always_clear(std::uint32_t horizon);

  /// Throws DomainError when index is outside [1, horizon].
  const Phase& phase_at(std::uint32_t transmission_index) const;

  const std::vector<Phase>& phases() const { return phases_; }
  std::uint32_t horizon() const { return horizon_; }
  double jam_rate() const { return jam_rate_; }

  friend bool operator==(const PhaseSchedule&, const PhaseSchedule&) = default;

 private:
  std::vector<Phase> phases_;
  std::uint32_t horizon_;
  double jam_rate_;
};

/// False iff the channel is disabled in the phase containing the index.
bool channel_available(const PhaseSchedule& schedule, std::size_t channel_id,
                       std::uint32_t transmission_index);

struct TransmissionAttempt {
  std::size_t device_id = 0;
  std::size_t arm_index = 0;
  std::size_t channel_id = 0;
  double start_s = 0.0;
  double airtime_s = 0.0;
  std::uint32_t transmission_index = 0;

  double end_s() const { return start_s + airtime_s; }
};

enum class FailureCause { none, jammed, collision, carrier_busy };

std::string_view to_string(FailureCause cause);

struct AckOutcome {
  bool success = true;
  FailureCause failure_cause = FailureCause::none;

  friend bool operator==(const AckOutcome&, const AckOutcome&) = default;
};

/// Half-open airtime intervals on the same channel intersect.
bool overlaps(const TransmissionAttempt& a, const TransmissionAttempt& b);

/// True (clear) iff no other in-flight attempt occupies the attempt's channel
/// at its start time. An attempt starting at the same instant is not yet
/// audible, so simultaneous starts both transmit and collide.
bool carrier_sense(const TransmissionAttempt& attempt,
                   std::span<const TransmissionAttempt> in_flight);

/// Outcome for an attempt that passed carrier sense. `jam_draw` in [0, 1) is
/// compared against the schedule's jam rate; it is irrelevant at rate 1.
/// Entries of `concurrent` equal to the attempt itself (same device and
/// index) are ignored.
AckOutcome resolve_outcome(const TransmissionAttempt& attempt, const PhaseSchedule& schedule,
                           std::span<const TransmissionAttempt> concurrent, double jam_draw = 0.0);

/// Per-device start offset, uniform in [0, interval).
std::vector<double> schedule_offsets(std::size_t num_devices, double interval_s,
                                     std::mt19937_64& rng);

/// Start time of the n-th (1-based) transmission.
inline double start_time(double offset_s, std::uint32_t n, double interval_s) {
  return offset_s + static_cast<double>(n - 1) * interval_s;
}

}  // namespace sicmab
