#include <doctest.h>

#include "sicmab/energy_model.hpp"
#include "sicmab/error.hpp"

using namespace sicmab;

namespace {

EnergyProfile flat_profile(double radio_w) {
  EnergyProfile p;
  p.p_mcu_w = 0.0297;
  p.tx_power_draw_w = {{0, radio_w}};
  return p;
}

}  // namespace

TEST_CASE("symbol duration") {
  CHECK(symbol_duration(7, 125e3) == doctest::Approx(1.024e-3).epsilon(1e-12));
  CHECK(symbol_duration(7, 250e3) == doctest::Approx(0.512e-3).epsilon(1e-12));
  CHECK(symbol_duration(12, 125e3) == doctest::Approx(32.768e-3).epsilon(1e-12));
  CHECK_THROWS_AS(symbol_duration(5, 125e3), DomainError);
  CHECK_THROWS_AS(symbol_duration(13, 125e3), DomainError);
  CHECK_THROWS_AS(symbol_duration(7, 0.0), DomainError);
}

TEST_CASE("preamble duration") {
  CHECK(preamble_duration(8, 1.024e-3) == doctest::Approx(12.544e-3).epsilon(1e-12));
  CHECK(preamble_duration(8, 0.512e-3) == doctest::Approx(6.272e-3).epsilon(1e-12));
  CHECK(preamble_duration(12, 1.024e-3) == doctest::Approx(16.640e-3).epsilon(1e-12));
  CHECK_THROWS_AS(preamble_duration(0, 1.024e-3), DomainError);
}

TEST_CASE("payload symbols") {
  RadioParams r;
  CHECK(payload_symbol_count(r) == 83);
  r.crc_enabled = false;
  CHECK(payload_symbol_count(r) == 83);

  // header-only frames collapse to the 8-symbol floor
  RadioParams tiny;
  tiny.payload_bytes = 1;
  tiny.explicit_header = false;
  tiny.crc_enabled = false;
  tiny.spreading_factor = 12;
  CHECK(payload_symbol_count(tiny) == 8);

  RadioParams empty;
  empty.payload_bytes = 0;
  empty.explicit_header = false;
  CHECK(payload_symbol_count(empty) == 8);

  RadioParams bad;
  bad.spreading_factor = 2;
  bad.low_data_rate_optimize = true;
  CHECK_THROWS_AS(payload_symbol_count(bad), DomainError);
  bad = RadioParams{};
  bad.payload_bytes = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("payload symbols grow monotonically with payload") {
  for (int sf = 7; sf <= 12; ++sf) {
    RadioParams r;
    r.spreading_factor = sf;
    r.low_data_rate_optimize = sf >= 11;
    int prev = 0;
    for (int pl = 1; pl <= 255; ++pl) {
      r.payload_bytes = pl;
      const int n = payload_symbol_count(r);
      CHECK(n >= prev);
      CHECK((n - 8) % (r.coding_rate + 4) == 0);
      prev = n;
    }
  }
}

TEST_CASE("transmission cost") {
  const TransmissionCost c = transmission_cost(RadioParams{}, flat_profile(0.05), 0);
  CHECK(c.t_symbol_s == doctest::Approx(1.024e-3).epsilon(1e-12));
  CHECK(c.t_toa_s == doctest::Approx(0.097536).epsilon(1e-12));
  CHECK(c.e_toa_j == doctest::Approx(7.7736192e-3).epsilon(1e-12));
  CHECK(c.e_active_j == doctest::Approx(c.e_toa_j).epsilon(1e-12));
  CHECK(reward(true, 400.0, c.e_toa_j) == doctest::Approx(51456.0836733551).epsilon(1e-12));
  CHECK(reward(false, 400.0, c.e_toa_j) == 0.0);

  EnergyProfile p = flat_profile(0.05);
  p.e_wakeup_j = 1e-3;
  p.e_processing_j = 2e-3;
  p.e_receive_j = 3e-3;
  const TransmissionCost d = transmission_cost(RadioParams{}, p, 0);
  CHECK(d.e_active_j == doctest::Approx(d.e_toa_j + 6e-3).epsilon(1e-12));
  CHECK_THROWS_AS(transmission_cost(RadioParams{}, p, 7), ConfigError);
}

TEST_CASE("energy efficiency") {
  CHECK(energy_efficiency(400.0, 1.0, 0.01) == doctest::Approx(40000.0));
  CHECK(energy_efficiency(400.0, 0.0, 0.01) == 0.0);
  CHECK_THROWS_AS(energy_efficiency(400.0, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(energy_efficiency(400.0, 1.5, 0.01), DomainError);
  CHECK_THROWS_AS(reward(true, 400.0, 0.0), DomainError);
}
