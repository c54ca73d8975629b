#include <doctest.h>

#include <random>
#include <vector>

#include "gen.hpp"
#include "sicmab/environment.hpp"
#include "sicmab/error.hpp"

using namespace sicmab;

TEST_CASE("default jammer schedule") {
  const auto s = PhaseSchedule::reference_jammer();
  CHECK(channel_available(s, 0, 200));
  CHECK_FALSE(channel_available(s, 0, 250));
  CHECK_FALSE(channel_available(s, 1, 400));
  CHECK(channel_available(s, 2, 250));
  CHECK(channel_available(s, 0, 401));
  CHECK_FALSE(channel_available(s, 2, 700));
  CHECK_FALSE(channel_available(s, 3, 601));
  CHECK(channel_available(s, 4, 700));
  CHECK(channel_available(s, 3, 801));
  CHECK_THROWS_AS(s.phase_at(0), DomainError);
  CHECK_THROWS_AS(s.phase_at(1001), DomainError);
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(PhaseSchedule({{1, 10, {}}, {12, 20, {}}}, 20), ConfigError);  // gap
  CHECK_THROWS_AS(PhaseSchedule({{1, 10, {}}}, 20), ConfigError);                // short
  CHECK_THROWS_AS(PhaseSchedule({}, 20), ConfigError);
  CHECK_THROWS_AS(PhaseSchedule({{1, 20, {}}}, 20, 1.5), ConfigError);
  const PhaseSchedule dedup({{1, 5, {3, 1, 3}}}, 5);
  CHECK(dedup.phases()[0].disabled == std::vector<std::size_t>{1, 3});
}

TEST_CASE("carrier sense and collisions") {
  const auto clear = PhaseSchedule::always_clear(10);
  const TransmissionAttempt a{0, 0, 2, 1.00, 0.1, 1};
  const TransmissionAttempt b{1, 0, 2, 1.05, 0.1, 1};
  const TransmissionAttempt c{2, 0, 3, 1.05, 0.1, 1};
  const TransmissionAttempt d{3, 0, 2, 1.10, 0.1, 1};  // starts as a ends

  CHECK(overlaps(a, b));
  CHECK_FALSE(overlaps(a, c));
  CHECK_FALSE(overlaps(a, d));

  const std::vector<TransmissionAttempt> air{a};
  CHECK_FALSE(carrier_sense(b, air));
  CHECK(carrier_sense(c, air));
  CHECK(carrier_sense(d, air));
  const TransmissionAttempt twin{5, 0, 2, 1.00, 0.1, 1};
  CHECK(carrier_sense(twin, air));  // simultaneous start is not audible

  const std::vector<TransmissionAttempt> all{a, b, c};
  CHECK(resolve_outcome(a, clear, all).failure_cause == FailureCause::collision);
  CHECK(resolve_outcome(c, clear, all).success);
  CHECK(resolve_outcome(a, clear, std::vector<TransmissionAttempt>{a}).success);
}

TEST_CASE("jamming") {
  const PhaseSchedule half({{1, 10, {0}}}, 10, 0.5);
  const TransmissionAttempt a{0, 0, 0, 0.0, 0.1, 3};
  CHECK(resolve_outcome(a, half, {}, 0.49).failure_cause == FailureCause::jammed);
  CHECK(resolve_outcome(a, half, {}, 0.5).success);
  const auto s = PhaseSchedule::reference_jammer();
  const TransmissionAttempt j{0, 0, 0, 0.0, 0.1, 300};
  CHECK(resolve_outcome(j, s, {}, 0.999).failure_cause == FailureCause::jammed);
}

TEST_CASE("property: collisions are symmetric") {
  const auto clear = PhaseSchedule::always_clear(10);
  for (int k = 0; k < gen::kCases; ++k) {
    auto rng = gen::rng_for(31, k);
    std::vector<TransmissionAttempt> xs;
    const int n = gen::uniform_int(rng, 2, 8);
    for (int i = 0; i < n; ++i) {
      xs.push_back({static_cast<std::size_t>(i), 0, static_cast<std::size_t>(gen::uniform_int(rng, 0, 2)),
                    gen::uniform(rng, 0.0, 1.0), gen::uniform(rng, 0.01, 0.3), 1});
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (i == j) continue;
        CHECK(overlaps(xs[i], xs[j]) == overlaps(xs[j], xs[i]));
        const std::vector<TransmissionAttempt> pair{xs[i], xs[j]};
        CHECK(resolve_outcome(xs[i], clear, pair).success ==
              resolve_outcome(xs[j], clear, pair).success);
      }
    }
  }
}

TEST_CASE("offsets") {
  std::mt19937_64 rng(7);
  const auto off = schedule_offsets(1000, 15.0, rng);
  for (double o : off) {
    CHECK(o >= 0.0);
    CHECK(o < 15.0);
  }
  std::mt19937_64 again(7);
  CHECK(schedule_offsets(1000, 15.0, again) == off);
  CHECK(start_time(2.0, 3, 15.0) == 32.0);
  CHECK_THROWS_AS(schedule_offsets(0, 15.0, rng), ConfigError);
}
